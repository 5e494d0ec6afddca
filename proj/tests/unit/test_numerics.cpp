#include <gla/error.hpp>
#include <gla/numerics.hpp>

#include <oracles.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace gla;

namespace {

Complex horner(const Vector& p, Complex s) {
    Complex v = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) v = v * s + p(k);
    return v;
}

std::vector<Complex> sorted(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

std::vector<Complex> eigenvalues_of(const Matrix& A) {
    Eigen::EigenSolver<Matrix> es(A, false);
    std::vector<Complex> v;
    for (Eigen::Index i = 0; i < A.rows(); ++i) v.push_back(es.eigenvalues()(i));
    return v;
}

}  // namespace

TEST(Lyapunov, MatchesKroneckerSolveOnRandomSystems) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 10;
        const Matrix Am = oracle::random_stable(n, rng);
        const Matrix Q = oracle::random_spd(n, rng);
        const Matrix P = solve_lyapunov(Am, Q);
        const Matrix Pk = oracle::kronecker_lyapunov(Am, Q);
        EXPECT_LE((P - Pk).norm(), 1e-8 * Pk.norm()) << "n = " << n;
        EXPECT_LE((Am.transpose() * P + P * Am + Q).norm(), 1e-10 * Q.norm());
    }
}

TEST(Lyapunov, SolutionIsSymmetricPositiveDefinite) {
    std::mt19937_64 rng(3);
    const Matrix Am = oracle::random_stable(7, rng);
    const Matrix P = solve_lyapunov(Am, Matrix::Identity(7, 7));
    EXPECT_LE((P - P.transpose()).norm(), 1e-14 * P.norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(P);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Lyapunov, ScalarCase) {
    Matrix a(1, 1), q(1, 1);
    a << -2.0;
    q << 3.0;
    EXPECT_NEAR(solve_lyapunov(a, q)(0, 0), 0.75, 1e-15);
}

TEST(Lyapunov, RejectsNonHurwitzAndAsymmetricQ) {
    Matrix A = Matrix::Identity(2, 2);
    EXPECT_THROW(solve_lyapunov(A, Matrix::Identity(2, 2)), NumericalError);
    Matrix Am = -Matrix::Identity(2, 2);
    Matrix Q(2, 2);
    Q << 1, 0.5, 0, 1;
    EXPECT_THROW(solve_lyapunov(Am, Q), Error);
}

TEST(Eigen, BiorthogonalReconstruction) {
    std::mt19937_64 rng(5);
    for (int n : {2, 5, 9, 14}) {
        const Matrix A = oracle::random_stable(n, rng);
        const auto d = eig_biorthogonal(A);
        const CMatrix I = d.left * d.right;
        EXPECT_LE((I - CMatrix::Identity(n, n)).norm(), 1e-10);
        const CMatrix R = d.right * d.eigenvalues.asDiagonal() * d.left;
        EXPECT_LE((R - A.cast<Complex>()).norm(), 1e-9 * A.norm());
    }
}

TEST(Eigen, PairsAreAdjacentConjugatesAndOrdered) {
    std::mt19937_64 rng(8);
    const Matrix A = oracle::random_stable(10, rng);
    const auto d = eig_biorthogonal(A);
    for (Eigen::Index i = 0; i + 1 < d.eigenvalues.size(); ++i) {
        EXPECT_LE(std::abs(d.eigenvalues(i).imag()), std::abs(d.eigenvalues(i + 1).imag()) + 1e-9);
        if (d.eigenvalues(i).imag() > 1e-9) {
            EXPECT_NEAR(std::abs(d.eigenvalues(i + 1) - std::conj(d.eigenvalues(i))), 0.0, 1e-12);
            EXPECT_LE((d.right.col(i + 1) - d.right.col(i).conjugate()).norm(), 1e-12);
        }
    }
}

TEST(Eigen, RepeatedSemisimpleEigenvalues) {
    std::mt19937_64 rng(2);
    Vector dvals(6);
    dvals << -0.1393, -0.1393, -0.3, -0.3, -0.0455, -1.0;
    const Matrix T = oracle::random_orthogonal(6, rng) + 0.2 * Matrix::Identity(6, 6);
    const Matrix A = T * dvals.asDiagonal() * T.inverse();
    const auto d = eig_biorthogonal(A);
    EXPECT_LE((d.left * d.right - CMatrix::Identity(6, 6)).norm(), 1e-9);
    int count = 0;
    for (Eigen::Index i = 0; i < 6; ++i) count += std::abs(d.eigenvalues(i) - Complex(-0.1393, 0)) < 1e-8;
    EXPECT_EQ(count, 2);
}

TEST(Eigen, DefectiveMatrixIsRejected) {
    Matrix J(2, 2);
    J << -1, 1, 0, -1;
    EXPECT_THROW(eig_biorthogonal(J), NumericalError);
}

TEST(Polynomials, CharacteristicPolynomialMatchesFaddeev) {
    std::mt19937_64 rng(13);
    for (int n : {1, 3, 6, 8}) {
        const Matrix A = oracle::random_stable(n, rng);
        const Vector c = characteristic_polynomial(A);
        const Vector f = oracle::faddeev_char_poly(A);
        ASSERT_EQ(c.size(), n + 1);
        EXPECT_LE((c - f).norm(), 1e-8 * f.norm());
    }
}

TEST(Polynomials, RootsRoundTrip) {
    std::vector<Complex> r{{-1.0, 0.0}, {-0.5, 2.0}, {-0.5, -2.0}, {3.0, 0.0}};
    const Vector p = polynomial_from_roots(r);
    EXPECT_DOUBLE_EQ(p(0), 1.0);
    const auto back = sorted(polynomial_roots(p));
    const auto ref = sorted(r);
    ASSERT_EQ(back.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(std::abs(back[i] - ref[i]), 0.0, 1e-10);
}

TEST(TransmissionZeros, MatchNumeratorPolynomial) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial % 5;
        const Matrix A = oracle::random_stable(n, rng);
        Vector b(n);
        RowVector c(n);
        for (int i = 0; i < n; ++i) {
            b(i) = nd(rng);
            c(i) = nd(rng);
        }
        const auto z = transmission_zeros(A, b, c, Matrix::Zero(1, 1));
        const Vector num = oracle::transfer_numerator(A, b, c);
        // generic system: relative degree 1, n - 1 zeros
        EXPECT_EQ(static_cast<int>(z.size()), n - 1);
        const double scale = num.cwiseAbs().maxCoeff();
        for (auto s : z) EXPECT_LE(std::abs(horner(num, s)), 1e-7 * scale * std::pow(1 + std::abs(s), n)) << s;
    }
}

TEST(TransmissionZeros, KnownZero) {
    // G(s) = (s - 1) / ((s + 2)(s + 3))
    Matrix A(2, 2);
    A << 0, 1, -6, -5;
    Vector b(2);
    b << 0, 1;
    RowVector c(2);
    c << -1, 1;
    const auto z = transmission_zeros(A, b, c, Matrix::Zero(1, 1));
    ASSERT_EQ(z.size(), 1u);
    EXPECT_NEAR(z[0].real(), 1.0, 1e-12);
    EXPECT_THROW(transmission_zeros(A, Matrix::Identity(2, 2), c, Matrix::Zero(1, 2)), InvalidArgument);
}

TEST(BassGura, CompanionFormClosedForm) {
    Matrix A(3, 3);
    A << 0, 1, 0, 0, 0, 1, -6, -11, -6;  // (s+1)(s+2)(s+3)
    Vector b(3);
    b << 0, 0, 1;
    Vector desired(4);
    desired << 1, 9, 26, 24;  // (s+2)(s+3)(s+4)
    const RowVector K = bass_gura_place(A, b, desired);
    EXPECT_NEAR(K(0), 24 - 6, 1e-12);
    EXPECT_NEAR(K(1), 26 - 11, 1e-12);
    EXPECT_NEAR(K(2), 9 - 6, 1e-12);
}

TEST(BassGura, PlacesPolesOfRandomSystems) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int n : {2, 4, 6}) {
        const Matrix A = oracle::random_stable(n, rng);
        Vector b(n);
        for (int i = 0; i < n; ++i) b(i) = nd(rng);
        std::vector<Complex> target;
        for (int i = 0; i < n; ++i) target.emplace_back(-1.0 - 0.5 * i, 0.0);
        const RowVector K = bass_gura_place(A, b, polynomial_from_roots(target));
        const auto got = sorted(eigenvalues_of(A - b * K));
        const auto want = sorted(target);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, 1e-6);
    }
}

TEST(BassGura, UncontrollablePairIsRejected) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = -1;
    A(1, 1) = -2;
    Vector b(2);
    b << 1, 0;
    Vector d(3);
    d << 1, 3, 2;
    EXPECT_THROW(bass_gura_place(A, b, d), NumericalError);
    EXPECT_THROW(controllable_canonical_transform(A, b), NumericalError);
}

TEST(CanonicalTransform, CompanionCoordinates) {
    std::mt19937_64 rng(6);
    const int n = 5;
    const Matrix A = oracle::random_stable(n, rng);
    Vector b = Vector::Ones(n);
    const Matrix T = controllable_canonical_transform(A, b);
    const Matrix Ac = T.inverse() * A * T;
    const Vector bc = T.inverse() * b;
    const Vector a = characteristic_polynomial(A);
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j < n; ++j) EXPECT_NEAR(Ac(i, j), j == i + 1 ? 1.0 : 0.0, 1e-8);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(Ac(n - 1, j), -a(n - j), 1e-7);
    EXPECT_NEAR((bc - Vector::Unit(n, n - 1)).norm(), 0.0, 1e-9);
}

TEST(Norms, SpectralNormAndAbscissa) {
    std::mt19937_64 rng(9);
    const Matrix A = oracle::random_stable(6, rng);
    Eigen::JacobiSVD<Matrix> svd(A);
    EXPECT_NEAR(spectral_norm(A), svd.singularValues()(0), 1e-12 * svd.singularValues()(0));
    double abscissa = -1e300;
    for (auto e : eigenvalues_of(A)) abscissa = std::max(abscissa, e.real());
    EXPECT_NEAR(spectral_abscissa(A), abscissa, 1e-12);
}

TEST(Controllability, MatrixColumns) {
    Matrix A(2, 2);
    A << 0, 1, -2, -3;
    Matrix B(2, 1);
    B << 0, 1;
    const Matrix C = controllability_matrix(A, B);
    EXPECT_EQ(C.cols(), 2);
    EXPECT_NEAR((C.col(1) - A * B).norm(), 0.0, 1e-15);
}

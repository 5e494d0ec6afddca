#include <gla/aerofoil.hpp>
#include <gla/error.hpp>

#include <oracles.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace gla;
namespace ix = gla::aerofoil_index;

namespace {

std::vector<Complex> spectrum(const Matrix& A) {
    Eigen::EigenSolver<Matrix> es(A, false);
    std::vector<Complex> v;
    for (Eigen::Index i = 0; i < A.rows(); ++i) v.push_back(es.eigenvalues()(i));
    return v;
}

double min_distance(const std::vector<Complex>& v, Complex z) {
    double d = 1e300;
    for (auto e : v) d = std::min(d, std::abs(e - z));
    return d;
}

AerofoilParams in_vacuo() {
    AerofoilParams p;
    p.aero_scale = 0.0;
    return p;
}

}  // namespace

TEST(Aerofoil, DefaultModelHasFourteenStatesAndIsStable) {
    const auto fom = assemble_fom(AerofoilParams{});
    EXPECT_EQ(fom.states(), 14);
    EXPECT_EQ(fom.Bc.cols(), 1);
    EXPECT_EQ(fom.Bg.cols(), 1);
    EXPECT_EQ(fom.C.rows(), 3);
    EXPECT_LT(spectral_abscissa(fom.A), 0.0);
}

TEST(Aerofoil, KussnerLagEigenvaluesAppearTwice) {
    const auto ev = spectrum(assemble_fom(AerofoilParams{}).A);
    int n = 0;
    for (auto e : ev) n += std::abs(e - Complex(-0.1393, 0.0)) <= 1e-6;
    EXPECT_EQ(n, 2);
}

TEST(Aerofoil, InVacuoSpectrumMatchesStructuralEigenproblem) {
    const auto p = in_vacuo();
    const auto ev = spectrum(assemble_fom(p).A);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(structural_stiffness(p), structural_mass(p));
    ASSERT_EQ(ges.info(), Eigen::Success);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const double w = std::sqrt(ges.eigenvalues()(i));
        EXPECT_LE(min_distance(ev, Complex(0.0, w)), 1e-9) << "omega " << w;
        EXPECT_LE(min_distance(ev, Complex(0.0, -w)), 1e-9) << "omega " << w;
    }
}

TEST(Aerofoil, FlutterBoundaryIsBracketed) {
    auto abscissa = [](double U) {
        AerofoilParams p;
        p.reduced_velocity = U;
        return spectral_abscissa(assemble_fom(p).A);
    };
    EXPECT_LT(abscissa(4.5), 0.0);
    EXPECT_GT(abscissa(7.0), 0.0);
    double lo = 4.5, hi = 7.0;
    for (int k = 0; k < 40; ++k) {
        const double mid = 0.5 * (lo + hi);
        (abscissa(mid) < 0.0 ? lo : hi) = mid;
    }
    EXPECT_GT(lo, 5.5);
    EXPECT_LT(lo, 6.5);
}

TEST(Aerofoil, InVacuoNonlinearityIsMassScaledStiffnessForce) {
    const auto p = in_vacuo();
    const auto fom = assemble_fom(p);
    Vector w = Vector::Zero(14);
    w(ix::alpha) = 0.2;
    w(ix::xi) = -0.3;
    w(ix::beta) = 0.1;
    const Vector F = fom.eval_nonlinear(w);
    const Vector expect = -structural_mass(p).inverse() * cubic_stiffness_force(p, w.head(3));
    EXPECT_LE((F.segment(3, 3) - expect).norm(), 1e-14);
    EXPECT_EQ(F.head(3).norm(), 0.0);
    EXPECT_EQ(F.tail(8).norm(), 0.0);
}

TEST(Aerofoil, StiffnessForceIsPotentialGradient) {
    AerofoilParams p;
    p.k_alpha2 = 0.7;
    p.k_xi2 = -0.4;
    Vector q(3);
    q << 0.15, -0.2, 0.05;
    const Matrix g = oracle::fd_jacobian(
        [&](const Vector& x) { return Vector::Constant(1, cubic_stiffness_potential(p, x)); }, q, 1e-6);
    EXPECT_LE((g.transpose() - cubic_stiffness_force(p, q)).norm(), 1e-9);
}

TEST(Aerofoil, CubicOnlyNonlinearityIsOdd) {
    const auto fom = assemble_fom(AerofoilParams{});
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 0.2);
    Vector w(14);
    for (int i = 0; i < 14; ++i) w(i) = nd(rng);
    EXPECT_LE((fom.eval_nonlinear(-w) + fom.eval_nonlinear(w)).norm(), 1e-15);

    AerofoilParams q;
    q.k_alpha2 = 0.5;
    const auto fq = assemble_fom(q);
    EXPECT_GT((fq.eval_nonlinear(-w) + fq.eval_nonlinear(w)).norm(), 1e-6);
}

TEST(Aerofoil, ResidualJacobianAtOriginIsA) {
    const auto fom = assemble_fom(AerofoilParams{});
    const Vector u = Vector::Zero(1);
    const Matrix J =
        oracle::fd_jacobian([&](const Vector& w) { return fom.residual(w, u, u); }, Vector::Zero(14), 1e-5);
    EXPECT_LE((J - fom.A).norm(), 1e-8 * fom.A.norm());
}

TEST(Aerofoil, InputsEnterTheirOwnRows) {
    const auto fom = assemble_fom(AerofoilParams{});
    for (int i = 0; i < 14; ++i) {
        if (i != ix::gust_lift && i != ix::gust_hinge) EXPECT_EQ(fom.Bg(i, 0), 0.0) << i;
        if (i < 3 || i >= 6) EXPECT_EQ(fom.Bc(i, 0), 0.0) << i;
    }
}

TEST(Aerofoil, InVacuoUndampedMotionConservesEnergy) {
    const auto p = in_vacuo();
    const auto fom = assemble_fom(p);
    const Matrix Ms = structural_mass(p), Ks = structural_stiffness(p);
    auto energy = [&](const Vector& w) {
        const Vector q = w.head(3), v = w.segment(3, 3);
        return 0.5 * v.dot(Ms * v) + 0.5 * q.dot(Ks * q) + cubic_stiffness_potential(p, q);
    };
    Vector w0 = Vector::Zero(14);
    w0(ix::alpha) = 0.3;
    w0(ix::xi) = 0.2;
    const Vector u = Vector::Zero(1);
    const auto xs = oracle::rk4([&](double, const Vector& w) { return fom.residual(w, u, u); }, w0, 0.02, 20000);
    const double H0 = energy(w0);
    double drift = 0.0;
    for (const auto& w : xs) drift = std::max(drift, std::abs(energy(w) - H0));
    EXPECT_LE(drift, 1e-8 * H0);
}

TEST(Aerofoil, LagFunctions) {
    const LagConstants l;
    EXPECT_DOUBLE_EQ(l.wagner(0.0), 0.5);
    EXPECT_NEAR(l.wagner(1e4), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(l.kussner_lift(0.0), 0.0);
    EXPECT_NEAR(l.kussner_lift(1e4), 1.0, 1e-12);
    EXPECT_LT(l.wagner(1.0), l.wagner(2.0));
}

TEST(Aerofoil, TheodorsenFunctionsAtReferenceHingePositions) {
    const double pi = std::numbers::pi;
    const auto t0 = theodorsen_t(-0.3, 0.0);
    EXPECT_NEAR(t0.T1, -2.0 / 3.0, 1e-15);
    EXPECT_NEAR(t0.T4, -pi / 2.0, 1e-15);
    EXPECT_NEAR(t0.T10, 1.0 + pi / 2.0, 1e-15);
    EXPECT_NEAR(t0.T11, pi / 2.0 + 2.0, 1e-15);
    const auto t1 = theodorsen_t(-0.3, 1.0);
    EXPECT_NEAR(t1.T1, 0.0, 1e-15);
    EXPECT_NEAR(t1.T4, 0.0, 1e-15);
    EXPECT_NEAR(t1.T10, 0.0, 1e-15);
}

TEST(Aerofoil, InvalidParametersAreRejected) {
    AerofoilParams p;
    p.mass_ratio = -1.0;
    EXPECT_THROW(assemble_fom(p), InvalidArgument);
    AerofoilParams q;
    q.reduced_velocity = 0.0;
    EXPECT_THROW(assemble_fom(q), InvalidArgument);
    AerofoilParams r;
    r.lags.wagner_weights = {0.1, 0.1, 0.1};
    r.lags.wagner_rates = {0.1, 0.2, 0.3};
    EXPECT_THROW(assemble_fom(r), InvalidArgument);
}

#include "gla/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gla/error.hpp"

namespace gla {

namespace {

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0.0 ? " - " : " + ") << std::abs(z.imag()) << "j";
    return os.str();
}

void require_square(const Matrix& A, const char* what) {
    if (A.rows() != A.cols() || A.rows() == 0) {
        throw InvalidArgument(std::string(what) + " must be a non-empty square matrix");
    }
}

// Makes the largest-modulus entry of v real and positive.
void normalize_column(Eigen::Ref<CVector> v) {
    const double norm = v.norm();
    if (norm == 0.0) return;
    v /= norm;
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v(imax);
    v *= std::conj(pivot) / std::abs(pivot);
    v(imax) = Complex(v(imax).real(), 0.0);
}

// Orthonormal basis of the k-dimensional (near) null space of M.
CMatrix null_space(const CMatrix& M, Eigen::Index k, double tol, double scale, Complex lambda) {
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index n = M.cols();
    if (s(n - k) > tol * scale) {
        std::ostringstream os;
        os << "defective eigenvalue cluster at " << format_complex(lambda) << " (multiplicity " << k
           << ", null-space deficit singular value " << s(n - k) << ")";
        throw NumericalError(os.str());
    }
    return svd.matrixV().rightCols(k);
}

}  // namespace

Matrix solve_lyapunov(const Matrix& Am, const Matrix& Q) {
    require_square(Am, "Am");
    require_square(Q, "Q");
    if (Am.rows() != Q.rows()) throw InvalidArgument("Am and Q dimensions differ");
    const double qscale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * qscale) {
        throw NumericalError("Lyapunov weighting Q is not symmetric");
    }

    const Eigen::Index n = Am.rows();
    Eigen::ComplexSchur<CMatrix> schur(Am.cast<Complex>());
    if (schur.info() != Eigen::Success) throw NumericalError("Schur factorisation of Am failed");
    const CMatrix& T = schur.matrixT();
    const CMatrix& U = schur.matrixU();

    for (Eigen::Index i = 0; i < n; ++i) {
        if (T(i, i).real() >= 0.0) {
            throw NumericalError("Am is not Hurwitz: eigenvalue " + format_complex(T(i, i)) +
                                 " has non-negative real part");
        }
    }

    // T^H X + X T = C with X = U^H P U, C = -U^H Q U.
    const CMatrix C = -(U.adjoint() * Q.cast<Complex>() * U);
    CMatrix X = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex rhs = C(i, j);
            for (Eigen::Index k = 0; k < i; ++k) rhs -= std::conj(T(k, i)) * X(k, j);
            for (Eigen::Index k = 0; k < j; ++k) rhs -= X(i, k) * T(k, j);
            X(i, j) = rhs / (std::conj(T(i, i)) + T(j, j));
        }
    }
    const Matrix P = (U * X * U.adjoint()).real();
    return 0.5 * (P + P.transpose());
}

SpectralDecomposition eig_biorthogonal(const Matrix& A, double max_condition) {
    require_square(A, "A");
    const Eigen::Index n = A.rows();
    Eigen::EigenSolver<Matrix> es(A, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");

    CVector lambda = es.eigenvalues();
    CMatrix vectors = es.eigenvectors();
    const double scale = std::max(1.0, A.norm());
    const double cluster_tol = 1e-9 * scale;

    // Group coincident eigenvalues; their individual eigenvectors are not
    // unique, so the eigenspace is recomputed as a null space.
    std::vector<int> cluster(static_cast<size_t>(n), -1);
    int next_cluster = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = next_cluster;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (cluster[j] < 0 && std::abs(lambda(i) - lambda(j)) < cluster_tol) cluster[j] = next_cluster;
        }
        ++next_cluster;
    }
    for (int c = 0; c < next_cluster; ++c) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (cluster[i] == c) members.push_back(i);
        }
        if (members.size() < 2) continue;
        Complex mean(0.0, 0.0);
        for (auto i : members) mean += lambda(i);
        mean /= static_cast<double>(members.size());
        if (std::abs(mean.imag()) < cluster_tol) mean = Complex(mean.real(), 0.0);
        const CMatrix shifted = A.cast<Complex>() - mean * CMatrix::Identity(n, n);
        const CMatrix basis = null_space(shifted, static_cast<Eigen::Index>(members.size()), 1e-8, scale, mean);
        for (size_t k = 0; k < members.size(); ++k) {
            lambda(members[k]) = mean;
            CVector v = basis.col(static_cast<Eigen::Index>(k));
            if (mean.imag() == 0.0) {
                // A real eigenspace admits a real basis; rotate so the vector is real.
                Eigen::Index imax = 0;
                v.cwiseAbs().maxCoeff(&imax);
                v *= std::conj(v(imax)) / std::abs(v(imax));
                v = v.real().cast<Complex>();
            }
            vectors.col(members[k]) = v;
        }
    }

    // Build sortable items: real eigenvalues alone, complex ones as pairs keyed
    // by their positive-imaginary member.
    struct Item {
        Eigen::Index index;
        Complex value;
        bool pair;
    };
    std::vector<Item> items;
    std::vector<bool> used(static_cast<size_t>(n), false);
    const double real_tol = 1e-12 * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(lambda(i).imag()) <= real_tol) {
            lambda(i) = Complex(lambda(i).real(), 0.0);
            vectors.col(i) = vectors.col(i).real().cast<Complex>();
            items.push_back({i, lambda(i), false});
            used[i] = true;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[i] || lambda(i).imag() < 0.0) continue;
        Eigen::Index partner = -1;
        double best = 1e300;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[j] || j == i || lambda(j).imag() >= 0.0) continue;
            const double d = std::abs(lambda(j) - std::conj(lambda(i)));
            if (d < best) {
                best = d;
                partner = j;
            }
        }
        if (partner < 0 || best > 1e-8 * scale) {
            throw NumericalError("spectrum is not closed under conjugation near " + format_complex(lambda(i)));
        }
        used[i] = used[partner] = true;
        items.push_back({i, lambda(i), true});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        const double ia = std::abs(a.value.imag());
        const double ib = std::abs(b.value.imag());
        if (ia != ib) return ia < ib;
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.index < b.index;
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.right.resize(n, n);
    Eigen::Index col = 0;
    for (const auto& item : items) {
        CVector v = vectors.col(item.index);
        normalize_column(v);
        out.eigenvalues(col) = item.value;
        out.right.col(col) = v;
        ++col;
        if (item.pair) {
            out.eigenvalues(col) = std::conj(item.value);
            out.right.col(col) = v.conjugate();
            ++col;
        }
    }

    Eigen::JacobiSVD<CMatrix> svd(out.right);
    const auto& s = svd.singularValues();
    out.condition = s(n - 1) > 0.0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
    if (!(out.condition <= max_condition)) {
        // Name the closest pair of eigenvalues as the likely culprit.
        double best = 1e300;
        Eigen::Index bi = 0;
        Eigen::Index bj = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double d = std::abs(out.eigenvalues(i) - out.eigenvalues(j));
                if (d < best && out.eigenvalues(i) != std::conj(out.eigenvalues(j))) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        std::ostringstream os;
        os << "ill-conditioned eigenbasis (cond " << out.condition << " > " << max_condition
           << "); clustered eigenvalues " << format_complex(out.eigenvalues(bi)) << " and "
           << format_complex(out.eigenvalues(bj));
        throw NumericalError(os.str());
    }
    out.left = out.right.fullPivLu().inverse();
    return out;
}

std::vector<Complex> transmission_zeros(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D) {
    require_square(A, "A");
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    const Eigen::Index p = C.rows();
    if (B.rows() != n || C.cols() != n || D.rows() != p || D.cols() != m) {
        throw InvalidArgument("transmission_zeros: inconsistent (A, B, C, D) dimensions");
    }
    if (m != p) {
        throw InvalidArgument("transmission_zeros: system must be square (inputs == outputs)");
    }
    Matrix M(n + m, n + m);
    M << A, B, C, D;
    Matrix N = Matrix::Zero(n + m, n + m);
    N.topLeftCorner(n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<Matrix> ges(M, N, false);
    if (ges.info() != Eigen::Success) throw NumericalError("QZ iteration on system pencil failed");
    const double limit = 1e8 * std::max(1.0, M.norm());
    std::vector<Complex> zeros;
    for (Eigen::Index i = 0; i < n + m; ++i) {
        const Complex alpha = ges.alphas()(i);
        const double beta = ges.betas()(i);
        if (std::abs(beta) * limit <= std::abs(alpha) || beta == 0.0) continue;
        Complex z = alpha / beta;
        if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
        zeros.push_back(z);
    }
    std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return zeros;
}

Vector polynomial_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{Complex(1.0, 0.0)};
    for (const Complex r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (size_t k = 0; k < c.size(); ++k) {
            next[k] += c[k];
            next[k + 1] -= r * c[k];
        }
        c = std::move(next);
    }
    Vector out(static_cast<Eigen::Index>(c.size()));
    for (size_t k = 0; k < c.size(); ++k) out(static_cast<Eigen::Index>(k)) = c[k].real();
    return out;
}

Vector characteristic_polynomial(const Matrix& A) {
    require_square(A, "A");
    const CVector ev = A.eigenvalues();
    return polynomial_from_roots(std::vector<Complex>(ev.data(), ev.data() + ev.size()));
}

std::vector<Complex> polynomial_roots(const Vector& coeffs) {
    Eigen::Index first = 0;
    while (first < coeffs.size() && coeffs(first) == 0.0) ++first;
    const Eigen::Index degree = coeffs.size() - first - 1;
    if (degree <= 0) return {};
    Matrix companion = Matrix::Zero(degree, degree);
    for (Eigen::Index j = 0; j < degree; ++j) companion(0, j) = -coeffs(first + 1 + j) / coeffs(first);
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    const CVector ev = companion.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

Matrix controllability_matrix(const Matrix& A, const Matrix& B) {
    require_square(A, "A");
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    if (B.rows() != n) throw InvalidArgument("controllability_matrix: B row count differs from A");
    Matrix Co(n, n * m);
    Matrix block = B;
    for (Eigen::Index k = 0; k < n; ++k) {
        Co.middleCols(k * m, m) = block;
        block = A * block;
    }
    return Co;
}

Matrix controllable_canonical_transform(const Matrix& A, const Vector& b) {
    require_square(A, "A");
    const Eigen::Index n = A.rows();
    if (b.size() != n) throw InvalidArgument("controllable_canonical_transform: b length differs from A");
    const Matrix Co = controllability_matrix(A, b);
    Eigen::JacobiSVD<Matrix> svd(Co);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > 1e-10 * s(0)) ++rank;
    }
    if (rank < n) {
        std::ostringstream os;
        os << "(A, b) is not controllable: controllability matrix rank " << rank << " < " << n;
        throw NumericalError(os.str());
    }
    const Vector a = characteristic_polynomial(A);
    // W maps the controllability matrix onto controllable-canonical coordinates.
    Matrix W = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; i + j <= n - 1; ++j) W(i, j) = a(n - 1 - i - j);
    }
    return Co * W;
}

RowVector bass_gura_place(const Matrix& A, const Vector& b, const Vector& desired_poly) {
    require_square(A, "A");
    const Eigen::Index n = A.rows();
    if (b.size() != n) throw InvalidArgument("bass_gura_place: b length differs from A");
    Vector alpha;
    if (desired_poly.size() == n + 1) {
        if (desired_poly(0) == 0.0) throw InvalidArgument("bass_gura_place: leading coefficient is 0");
        alpha = desired_poly / desired_poly(0);
    } else if (desired_poly.size() == n) {
        alpha.resize(n + 1);
        alpha << 1.0, desired_poly;
    } else {
        throw InvalidArgument("bass_gura_place: desired polynomial must have n or n+1 coefficients");
    }

    const Vector a = characteristic_polynomial(A);
    const Matrix T = controllable_canonical_transform(A, b);
    RowVector k_canonical(n);
    for (Eigen::Index j = 0; j < n; ++j) k_canonical(j) = alpha(n - j) - a(n - j);
    return T.transpose().fullPivLu().solve(k_canonical.transpose()).transpose();
}

double spectral_abscissa(const Matrix& A) {
    require_square(A, "A");
    return A.eigenvalues().real().maxCoeff();
}

double spectral_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

}  // namespace gla

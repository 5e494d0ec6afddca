#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace gla {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Eigendecomposition A = Phi * diag(eigenvalues) * Psi with Psi * Phi = I.
///
/// Ordering is deterministic: |Im| ascending, then Re descending, then the
/// solver index. Conjugate pairs are adjacent with the positive-imaginary
/// member first, and the second column of a pair is the exact conjugate of
/// the first.
struct SpectralDecomposition {
    CVector eigenvalues;
    CMatrix right;           // Phi, N x N
    CMatrix left;            // Psi, N x N
    double condition = 1.0;  // 2-norm condition number of Phi
};

/// Solves Am^T P + P Am = -Q for symmetric positive-definite P.
///
/// Uses a complex Schur factorisation of Am followed by triangular
/// substitution. Throws NumericalError when Am is not Hurwitz (the offending
/// eigenvalue is named in the message) or when Q is not symmetric to 1e-12.
Matrix solve_lyapunov(const Matrix& Am, const Matrix& Q);

/// Biorthogonal right/left eigenbases of a diagonalizable matrix.
///
/// Eigenvalues that coincide to within a relative 1e-9 are treated as one
/// cluster; the cluster's eigenspace is taken from the null space of
/// (A - lambda I) so semisimple repeated eigenvalues get a well-conditioned
/// basis. Throws NumericalError when cond(Phi) exceeds `max_condition` or a
/// cluster is defective.
SpectralDecomposition eig_biorthogonal(const Matrix& A, double max_condition = 1e8);

/// Finite transmission zeros of (A, B, C, D) from the Rosenbrock pencil
/// [[A, B], [C, D]] - s [[I, 0], [0, 0]]. Requires as many outputs as inputs.
std::vector<Complex> transmission_zeros(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D);

/// Monic characteristic polynomial coefficients [1, a1, ..., an] of A,
/// highest power first.
Vector characteristic_polynomial(const Matrix& A);

/// Monic polynomial [1, c1, ..., cn] with the given roots. Complex roots must
/// come in conjugate pairs; the imaginary residue is discarded.
Vector polynomial_from_roots(const std::vector<Complex>& roots);

/// Roots of a polynomial given highest power first (companion eigenvalues).
std::vector<Complex> polynomial_roots(const Vector& coeffs);

/// Bass-Gura pole placement: returns K0 (1 x n) such that the characteristic
/// polynomial of (A - b K0) equals `desired_poly`.
///
/// `desired_poly` is [1, alpha1, ..., alphan] or [alpha1, ..., alphan]
/// (highest power first, monic). For A in controllable companion form with
/// b = e_n the result is the coefficient difference in reversed order:
/// K0 = [alpha_n - a_n, ..., alpha_1 - a_1].
/// Throws NumericalError when the controllability matrix is rank deficient
/// (relative singular-value tolerance 1e-10).
RowVector bass_gura_place(const Matrix& A, const Vector& b, const Vector& desired_poly);

/// T = Co * W such that T^-1 A T is the companion form with last row
/// [-a_n, ..., -a_1] and T^-1 b = e_n. In these coordinates C T lists the
/// transfer-function numerator coefficients in ascending powers of s.
/// Throws NumericalError when (A, b) is not controllable.
Matrix controllable_canonical_transform(const Matrix& A, const Vector& b);

/// Controllability matrix [b, Ab, ..., A^{n-1} b].
Matrix controllability_matrix(const Matrix& A, const Matrix& B);

/// Largest real part of the spectrum.
double spectral_abscissa(const Matrix& A);

/// Spectral (induced 2-) norm.
double spectral_norm(const Matrix& A);

}  // namespace gla

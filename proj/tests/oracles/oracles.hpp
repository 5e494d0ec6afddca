#pragma once

// Reference computations used only by the tests. Each one takes a different route
// from the library code it checks.

#include <gla/numerics.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using gla::Matrix;
using gla::Vector;

// (I kron Am^T + Am^T kron I) vec(P) = -vec(Q), dense LU.
Matrix kronecker_lyapunov(const Matrix& Am, const Matrix& Q);

// Central-difference Jacobian.
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6);

// c adj(sI - A) b via Faddeev-LeVerrier; highest power first (length n).
Vector transfer_numerator(const Matrix& A, const Vector& b, const gla::RowVector& c);
// Characteristic polynomial via Faddeev-LeVerrier, [1, a1, ..., an].
Vector faddeev_char_poly(const Matrix& A);

// Routh array test; coefficients highest power first, leading zeros stripped.
bool routh_hurwitz(const Vector& poly);

// Time-invariant RK4 with a fixed step, returning samples at every step.
std::vector<Vector> rk4(const std::function<Vector(double, const Vector&)>& f, const Vector& x0, double dt, int steps);

// One-sided Welch PSD (Hann window, 50% overlap, density scaling, mean removed per segment).
struct Psd {
    std::vector<double> f;
    std::vector<double> p;
};
Psd welch(const std::vector<double>& x, double dt, int nperseg);

// Random Hurwitz matrix: random orthogonal similarity of a block-diagonal with given
// decay range and random oscillation frequencies.
Matrix random_stable(int n, std::mt19937_64& rng, double min_decay = 0.05, double max_decay = 2.0);
Matrix random_spd(int n, std::mt19937_64& rng, double min_eig = 0.1, double max_eig = 10.0);
Matrix random_orthogonal(int n, std::mt19937_64& rng);

double sample_variance(const std::vector<double>& x);

}  // namespace oracle

#pragma once

#include <gla/aerofoil.hpp>
#include <gla/numerics.hpp>
#include <gla/polynomial.hpp>

#include <string>
#include <vector>

namespace gla {

enum class ModeKind { Oscillatory, Real };

struct ModeInfo {
    Complex eigenvalue;      // for a pair, the +Im member
    double frequency = 0.0;  // |Im|, rad per unit time
    double damping_ratio = 1.0;
    ModeKind kind = ModeKind::Real;
    int source_index = 0;  // column in the full decomposition
    double gust_participation = 0.0;
    double control_participation = 0.0;
};

struct ModeCriteria {
    int n = 8;
    int real_modes = 2;  // real modes picked before oscillatory pairs (ranked by gust participation)
    double cluster_tol = 1e-6;
};

// Real block-diagonal modal form. Phi: N x n, Psi: n x N, Psi*Phi = I.
struct RealModalForm {
    Matrix Lambda;
    Matrix Phi;
    Matrix Psi;
    CVector eigenvalues;
};

struct ReducedOrderModel {
    Matrix A;    // n x n, 1x1 real blocks and [[s, w], [-w, s]] blocks
    Matrix Bc;   // n x m
    Matrix Bg;   // n x p
    Matrix C;    // physical outputs from x
    Matrix Phi;  // N x n
    Matrix Psi;  // n x N
    CVector eigenvalues;
    std::vector<ModeInfo> modes;
    PolynomialField full_nonlinear;  // F_NL of the originating full-order model
    std::vector<std::string> output_labels;
    std::string source_hash;

    int states() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(Bc.cols()); }
    Vector eval_f_nr(const Vector& x) const;
    bool has_nonlinearity() const { return !full_nonlinear.empty(); }
};

// Returns decomposition column indices; conjugate pairs contribute both members.
std::vector<int> select_modes(const SpectralDecomposition& decomp, const Matrix& Bgf, const ModeCriteria& criteria,
                              const Matrix& Bcf = Matrix());

RealModalForm realify(const CVector& eigenvalues, const CMatrix& Phi, const CMatrix& Psi);

ReducedOrderModel build_nrom(const FullOrderModel& fom, const SpectralDecomposition& decomp,
                             const std::vector<int>& modes);
ReducedOrderModel build_nrom(const FullOrderModel& fom, const ModeCriteria& criteria);

Vector eval_f_nr(const ReducedOrderModel& rom, const Vector& x);

std::vector<ModeInfo> describe_modes(const SpectralDecomposition& decomp, const Matrix& Bgf, const Matrix& Bcf);

}  // namespace gla

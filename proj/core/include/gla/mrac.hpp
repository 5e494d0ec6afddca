#pragma once

#include <gla/numerics.hpp>
#include <gla/rom.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gla {

// Explicit target for one modal block (index counts blocks of A, 1x1 or 2x2).
struct BlockTarget {
    int block = 0;
    double sigma = 0.0;  // decay rate, > 0
    double omega = 0.0;  // damped frequency (ignored for real blocks)
};

struct DampingSpec {
    double oscillatory_factor = 3.0;  // multiplies the decay rate of every complex pair
    double real_factor = 1.0;         // real (gust-lag) modes; 1 keeps them at open-loop values
    std::vector<BlockTarget> overrides;
    bool allow_destabilizing = false;
};

struct ModeTarget {
    double sigma;
    double omega;
    double zeta;
    bool oscillatory;
};

struct ReferenceModel {
    Matrix Am;
    Matrix Bm;
    std::vector<ModeTarget> targets;
    bool include_nonlinear = true;  // F_NR(x_m) in the reference dynamics
};

// Splits a block-modal matrix into its 1x1 and 2x2 diagonal blocks (start offsets).
std::vector<int> modal_blocks(const Matrix& A);

ReferenceModel build_reference_model(const Matrix& A, const Matrix& Bc, const DampingSpec& spec);
ReferenceModel build_reference_model(const ReducedOrderModel& rom, const DampingSpec& spec);

// theta = [Kx; Kr] in R^{(n+m) x m}; u = theta^T [x; r].
struct IdealGains {
    Matrix Kx;                // n x m
    Matrix Kr;                // m x m
    double residual_x = 0.0;  // ||A + Bc Kx^T - Am||_F
    double residual_r = 0.0;  // ||Bc Kr^T - Bm||_F
    bool exact = false;
    int controllability_rank = 0;

    Matrix theta() const;
};

IdealGains ideal_gains(const Matrix& A, const Matrix& Bc, const Matrix& Am, const Matrix& Bm);

enum class GammaMode { ScaledQ, Identity };

struct LyapunovDesign {
    Matrix Q;
    Matrix P;
    Matrix Gamma;
    Matrix Gamma_inv;
    double gamma = 0.0;
    GammaMode mode = GammaMode::ScaledQ;
};

// Gamma = gamma * blockdiag(Q, I_m) (ScaledQ) or gamma * I (Identity). gamma = 0 freezes adaptation.
LyapunovDesign make_lyapunov_design(const Matrix& Am, const Matrix& Q, double gamma, int m,
                                    GammaMode mode = GammaMode::ScaledQ);

struct ControllerState {
    Matrix theta;  // (n+m) x m
    Matrix K0;     // m x n, minimum-phase pre-gain

    static ControllerState zeros(int n, int m);
};

// -Gamma phi e^T P Bc
Matrix adaptation_rate(const LyapunovDesign& design, const Matrix& Bc, const Vector& e, const Vector& phi);

// One step with e and phi held over the step; every RK4 stage slope is then identical,
// so the update is theta - dt Gamma phi e^T P Bc.
Matrix adapt_step(const ControllerState& state, const Vector& e, const Vector& phi, const LyapunovDesign& design,
                  const Matrix& Bc, double dt);

Vector control_input(const ControllerState& state, const Vector& x, const Vector& r);

struct MinimumPhaseResult {
    RowVector K0;           // state-feedback pre-gain (zeros are feedback invariant, so zero here)
    RowVector C_corrected;  // output row whose zeros are the mirrored set
    std::vector<Complex> zeros_before;
    std::vector<Complex> zeros_after;
    bool corrected = false;
    Matrix A_modified;  // A + Bc K0
};

// SISO: mirrors right-half-plane transmission zeros of (A, b, c) into the left half-plane by
// rewriting the numerator in controllable canonical coordinates.
MinimumPhaseResult minimum_phase_correct(const Matrix& A, const Matrix& Bc, const RowVector& C);
MinimumPhaseResult minimum_phase_correct(const ReducedOrderModel& rom, int output_row);

struct LipschitzMonitor {
    double L_F = 0.0;
    double max_ratio = 0.0;
    bool violated = false;
    double first_violation_time = std::numeric_limits<double>::quiet_NaN();
    std::size_t samples = 0;
    std::size_t skipped = 0;

    // ratio logged, or NaN when ||x - xm|| < 1e-12
    double observe(double t, const Vector& x, const Vector& xm, const Vector& fx, const Vector& fxm);
};

double lipschitz_bound(const LyapunovDesign& design);

using NonlinearMap = std::function<Vector(const Vector&)>;

LipschitzMonitor lipschitz_margin(const LyapunovDesign& design, const NonlinearMap& f_nr, const std::vector<double>& t,
                                  const std::vector<Vector>& x, const std::vector<Vector>& xm);
LipschitzMonitor lipschitz_margin(const LyapunovDesign& design, const ReducedOrderModel& rom,
                                  const std::vector<double>& t, const std::vector<Vector>& x,
                                  const std::vector<Vector>& xm);

enum class CertificateMode { Full, ErrorOnly };

struct CertificateResult {
    std::vector<double> V;
    bool pass = false;
    double max_increase = 0.0;  // largest single-step increase of V
    int first_violation = -1;
    CertificateMode mode = CertificateMode::Full;
};

double lyapunov_value(const LyapunovDesign& design, const Vector& e, const Matrix& theta, const Matrix* theta_star);

CertificateResult lyapunov_certificate(const std::vector<Vector>& e, const std::vector<Matrix>& theta,
                                       const LyapunovDesign& design, const std::optional<Matrix>& theta_star,
                                       CertificateMode mode = CertificateMode::Full);

}  // namespace gla

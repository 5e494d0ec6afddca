#pragma once

#include <gla/numerics.hpp>
#include <gla/polynomial.hpp>

#include <string>
#include <vector>

namespace gla {

// Jones-type exponential approximations of the Wagner and Kussner functions,
// phi(tau) = 1 - sum_k w_k exp(-b_k tau), rates in reduced time.
struct LagConstants {
    std::vector<double> wagner_weights{0.165, 0.335};
    std::vector<double> wagner_rates{0.0455, 0.3};
    // Kussner lags for the lift/moment channel and for the hinge channel
    double kussner_lift_rate = 0.1393;
    double kussner_hinge_rate = 0.1393;

    double wagner(double tau) const;
    double kussner_lift(double tau) const;
};

// Typical section with pitch (alpha), plunge (xi = h/b) and trailing-edge flap (beta).
// All quantities nondimensional; time is semichords travelled.
struct AerofoilParams {
    double reduced_velocity = 4.5;  // U* = U / (b omega_alpha)
    double mass_ratio = 150.0;      // mu
    double a = -0.3;                // elastic axis aft of midchord, semichords
    double c = 0.5;                 // hinge aft of midchord, semichords
    double x_alpha = 0.25;
    double r_alpha = 0.5;
    double x_beta = 0.0125;
    double r_beta_sq = 0.00625;
    double omega_xi_ratio = 1.2;    // omega_xi / omega_alpha
    double omega_beta_ratio = 3.0;  // omega_beta / omega_alpha
    double zeta_alpha = 0.0;
    double zeta_xi = 0.0;
    double zeta_beta = 0.0;
    double k_alpha1 = 1.0;
    double k_xi1 = 1.0;
    double k_alpha3 = 3.0;
    double k_xi3 = 1.0;
    double k_alpha2 = 0.0;
    double k_xi2 = 0.0;
    double aero_scale = 1.0;  // 0 removes every aerodynamic load (in-vacuo limit)
    LagConstants lags;

    void validate() const;
};

struct TheodorsenT {
    double T1, T3, T4, T5, T7, T8, T9, T10, T11, T12, T13;
};
TheodorsenT theodorsen_t(double a, double c);

struct FullOrderModel {
    Matrix A;   // N x N
    Matrix Bc;  // N x m
    Matrix Bg;  // N x p
    Matrix C;   // physical outputs (rows: pitch, plunge, flap)
    PolynomialField nonlinear;
    std::vector<std::string> state_labels;
    std::vector<std::string> output_labels;

    int states() const { return static_cast<int>(A.rows()); }
    Vector eval_nonlinear(const Vector& w) const { return nonlinear(w); }
    Vector residual(const Vector& w, const Vector& uc, const Vector& ud) const;
};

// State order: [alpha, xi, beta, alpha', xi', beta',
//               z_alpha1, z_alpha2, z_xi1, z_xi2, z_beta1, z_beta2, g_lift, g_hinge]
namespace aerofoil_index {
constexpr int alpha = 0, xi = 1, beta = 2;
constexpr int alpha_dot = 3, xi_dot = 4, beta_dot = 5;
constexpr int wagner0 = 6, gust_lift = 12, gust_hinge = 13;
constexpr int states = 14;
}  // namespace aerofoil_index

LagConstants wagner_kussner_coeffs(const AerofoilParams& p);

FullOrderModel assemble_fom(const AerofoilParams& p);

Matrix structural_mass(const AerofoilParams& p);
Matrix structural_stiffness(const AerofoilParams& p);

// Generalized cubic (and quadratic) stiffness force on (alpha, xi, beta) before mass scaling.
Vector cubic_stiffness_force(const AerofoilParams& p, const Vector& q);
// Potential whose gradient is the force above.
double cubic_stiffness_potential(const AerofoilParams& p, const Vector& q);

}  // namespace gla

#include <gla/aerofoil.hpp>
#include <gla/error.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace gla {

using std::numbers::pi;

double LagConstants::wagner(double tau) const {
    double v = 1.0;
    for (std::size_t k = 0; k < wagner_weights.size(); ++k) v -= wagner_weights[k] * std::exp(-wagner_rates[k] * tau);
    return v;
}

double LagConstants::kussner_lift(double tau) const { return 1.0 - std::exp(-kussner_lift_rate * tau); }

void AerofoilParams::validate() const {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw InvalidArgument("aerofoil parameters: " + msg);
    };
    need(reduced_velocity > 0.0, "reduced_velocity must be positive");
    need(mass_ratio > 0.0, "mass_ratio must be positive");
    need(r_alpha > 0.0 && r_beta_sq > 0.0, "radii of gyration must be positive");
    need(omega_xi_ratio > 0.0 && omega_beta_ratio > 0.0, "frequency ratios must be positive");
    need(c > -1.0 && c < 1.0, "hinge position must lie inside the chord");
    need(k_alpha3 >= 0.0 && k_xi3 >= 0.0, "cubic coefficients must be non-negative (hardening)");
    need(aero_scale >= 0.0, "aero_scale must be non-negative");
    need(lags.wagner_weights.size() == lags.wagner_rates.size() && !lags.wagner_rates.empty(),
         "wagner weights and rates must pair up");
    for (double b : lags.wagner_rates) need(b > 0.0, "wagner rates must be positive");
    need(lags.kussner_lift_rate > 0.0 && lags.kussner_hinge_rate > 0.0, "kussner rates must be positive");
}

TheodorsenT theodorsen_t(double a, double c) {
    const double s = std::sqrt(1.0 - c * c);
    const double ac = std::acos(c);
    TheodorsenT t{};
    t.T1 = -(1.0 / 3.0) * s * (2.0 + c * c) + c * ac;
    t.T3 = -(1.0 / 8.0) * (1.0 - c * c) * (5.0 * c * c + 4.0) + 0.25 * c * (7.0 + 2.0 * c * c) * s * ac -
           (1.0 / 8.0 + c * c) * ac * ac;
    t.T4 = -ac + c * s;
    t.T5 = -(1.0 - c * c) - ac * ac + 2.0 * c * s * ac;
    t.T7 = -(1.0 / 8.0 + c * c) * ac + (1.0 / 8.0) * c * s * (7.0 + 2.0 * c * c);
    t.T8 = -(1.0 / 3.0) * s * (2.0 * c * c + 1.0) + c * ac;
    t.T9 = 0.5 * ((1.0 / 3.0) * s * s * s + a * t.T4);
    t.T10 = s + ac;
    t.T11 = ac * (1.0 - 2.0 * c) + s * (2.0 - c);
    t.T12 = s * (2.0 + c) - ac * (2.0 * c + 1.0);
    t.T13 = 0.5 * (-t.T7 - (c - a) * t.T1);
    return t;
}

LagConstants wagner_kussner_coeffs(const AerofoilParams& p) { return p.lags; }

Matrix structural_mass(const AerofoilParams& p) {
    const double ra2 = p.r_alpha * p.r_alpha;
    const double cross = p.r_beta_sq + p.x_beta * (p.c - p.a);
    Matrix M(3, 3);
    M << ra2, p.x_alpha, cross, p.x_alpha, 1.0, p.x_beta, cross, p.x_beta, p.r_beta_sq;
    return M;
}

namespace {

struct Freqs {
    double wa, wx, wb;
};

Freqs freqs(const AerofoilParams& p) {
    return {1.0 / p.reduced_velocity, p.omega_xi_ratio / p.reduced_velocity, p.omega_beta_ratio / p.reduced_velocity};
}

}  // namespace

Matrix structural_stiffness(const AerofoilParams& p) {
    const auto f = freqs(p);
    Matrix K = Matrix::Zero(3, 3);
    K(0, 0) = p.r_alpha * p.r_alpha * f.wa * f.wa * p.k_alpha1;
    K(1, 1) = f.wx * f.wx * p.k_xi1;
    K(2, 2) = p.r_beta_sq * f.wb * f.wb;
    return K;
}

Vector cubic_stiffness_force(const AerofoilParams& p, const Vector& q) {
    const auto f = freqs(p);
    const double ka = p.r_alpha * p.r_alpha * f.wa * f.wa;
    const double kx = f.wx * f.wx;
    Vector out = Vector::Zero(3);
    out[0] = ka * (p.k_alpha2 * q[0] * q[0] + p.k_alpha3 * q[0] * q[0] * q[0]);
    out[1] = kx * (p.k_xi2 * q[1] * q[1] + p.k_xi3 * q[1] * q[1] * q[1]);
    return out;
}

double cubic_stiffness_potential(const AerofoilParams& p, const Vector& q) {
    const auto f = freqs(p);
    const double ka = p.r_alpha * p.r_alpha * f.wa * f.wa;
    const double kx = f.wx * f.wx;
    const double a = q[0], x = q[1];
    return ka * (p.k_alpha2 * a * a * a / 3.0 + p.k_alpha3 * a * a * a * a / 4.0) +
           kx * (p.k_xi2 * x * x * x / 3.0 + p.k_xi3 * x * x * x * x / 4.0);
}

FullOrderModel assemble_fom(const AerofoilParams& p) {
    namespace ix = aerofoil_index;
    p.validate();
    const int N = ix::states;
    const double a = p.a, c = p.c, mu = p.mass_ratio;
    const auto t = theodorsen_t(a, c);
    const auto f = freqs(p);
    const double ra2 = p.r_alpha * p.r_alpha, rb2 = p.r_beta_sq;

    const Matrix Ms = structural_mass(p);
    const Matrix Ks = structural_stiffness(p);
    Matrix Ds = Matrix::Zero(3, 3);
    Ds(0, 0) = 2.0 * p.zeta_alpha * ra2 * f.wa;
    Ds(1, 1) = 2.0 * p.zeta_xi * f.wx;
    Ds(2, 2) = 2.0 * p.zeta_beta * rb2 * f.wb;

    // Non-circulatory loads. Rows: moment, lift, hinge moment; columns: alpha, xi, beta.
    Matrix Lacc(3, 3), Lvel(3, 3), Lpos = Matrix::Zero(3, 3);
    Lacc << pi / 2.0 * -(1.0 / 8.0 + a * a), pi / 2.0 * a, 0.5 * (t.T7 + (c - a) * t.T1), -pi * a, pi, -t.T1, -t.T13,
        t.T1 / 2.0, t.T3 / (2.0 * pi);
    Lvel << -pi / 2.0 * (0.5 - a), 0.0, 0.5 * (-t.T1 + t.T8 + (c - a) * t.T4 - 0.5 * t.T11), pi, 0.0, -t.T4,
        0.5 * (2.0 * t.T9 + t.T1 - (a - 0.5) * t.T4), 0.0, t.T4 * t.T11 / (4.0 * pi);
    Lpos(0, 2) = -0.5 * (t.T4 + t.T10);
    Lpos(2, 2) = -(t.T5 - t.T4 * t.T10) / (2.0 * pi);

    // Circulatory load distribution and 3/4-chord downwash
    Vector ccirc(3);
    ccirc << pi * (a + 0.5), 2.0 * pi, -t.T12 / 2.0;
    Vector qpos(3), qvel(3);
    qpos << 1.0, 0.0, t.T10 / pi;
    qvel << 0.5 - a, 1.0, t.T11 / (2.0 * pi);

    Matrix S = Matrix::Zero(3, 3);
    S(0, 0) = 2.0 / (pi * mu);
    S(1, 1) = -1.0 / (pi * mu);
    S(2, 2) = 2.0 / (pi * mu);
    S *= p.aero_scale;

    const Matrix M = Ms - S * Lacc;
    Eigen::FullPivLU<Matrix> lu(M);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-14 * M.norm() * M.norm() * M.norm())
        throw NumericalError("aerofoil mass matrix is singular");
    const Matrix Mi = lu.inverse();

    const auto& lg = p.lags;
    double phi0 = 1.0;
    for (double w : lg.wagner_weights) phi0 -= w;
    const int nw = static_cast<int>(lg.wagner_rates.size());
    if (nw != 2) throw InvalidArgument("aerofoil state layout expects two Wagner lag terms");

    FullOrderModel fom;
    fom.A = Matrix::Zero(N, N);
    Matrix& A = fom.A;
    A.block(0, 3, 3, 3).setIdentity();
    const Vector Sc = S * ccirc;
    const Matrix Kp = -Ks + S * Lpos + phi0 * Sc * qpos.transpose();
    const Matrix Kv = -Ds + S * Lvel + phi0 * Sc * qvel.transpose();
    A.block(3, 0, 3, 3) = Mi * Kp;
    A.block(3, 3, 3, 3) = Mi * Kv;
    const Vector MiSc = Mi * Sc;
    for (int X = 0; X < 3; ++X) {
        for (int k = 0; k < nw; ++k) {
            const int z = ix::wagner0 + 2 * X + k;
            const double bk = lg.wagner_rates[k];
            A.block(3, z, 3, 1) = MiSc * (lg.wagner_weights[k] * bk);
            A(z, z) = -bk;
            switch (X) {
                case 0:
                    A(z, ix::alpha) += 1.0;
                    A(z, ix::alpha_dot) += 0.5 - a;
                    break;
                case 1:
                    A(z, ix::xi_dot) += 1.0;
                    break;
                default:
                    A(z, ix::beta) += t.T10 / pi;
                    A(z, ix::beta_dot) += t.T11 / (2.0 * pi);
                    break;
            }
        }
    }
    Vector gl(3), gh(3);
    gl << pi * (a + 0.5) * lg.kussner_lift_rate, 2.0 * pi * lg.kussner_lift_rate, 0.0;
    gh << 0.0, 0.0, -t.T12 / 2.0 * lg.kussner_hinge_rate;
    A.block(3, ix::gust_lift, 3, 1) = Mi * (S * gl);
    A.block(3, ix::gust_hinge, 3, 1) = Mi * (S * gh);
    A(ix::gust_lift, ix::gust_lift) = -lg.kussner_lift_rate;
    A(ix::gust_hinge, ix::gust_hinge) = -lg.kussner_hinge_rate;

    fom.Bg = Matrix::Zero(N, 1);
    fom.Bg(ix::gust_lift, 0) = 1.0;
    fom.Bg(ix::gust_hinge, 0) = 1.0;

    // commanded flap angle acts through the actuator spring
    fom.Bc = Matrix::Zero(N, 1);
    fom.Bc.block(3, 0, 3, 1) = Mi.col(2) * (rb2 * f.wb * f.wb);

    fom.C = Matrix::Zero(3, N);
    fom.C(0, ix::alpha) = fom.C(1, ix::xi) = fom.C(2, ix::beta) = 1.0;

    fom.nonlinear = PolynomialField(N);
    const double ka = ra2 * f.wa * f.wa, kx = f.wx * f.wx;
    for (int r = 0; r < 3; ++r) {
        const int row = ix::alpha_dot + r;
        fom.nonlinear.add_quadratic(row, -Mi(r, 0) * ka * p.k_alpha2, ix::alpha, ix::alpha);
        fom.nonlinear.add_quadratic(row, -Mi(r, 1) * kx * p.k_xi2, ix::xi, ix::xi);
        fom.nonlinear.add_cubic(row, -Mi(r, 0) * ka * p.k_alpha3, ix::alpha, ix::alpha, ix::alpha);
        fom.nonlinear.add_cubic(row, -Mi(r, 1) * kx * p.k_xi3, ix::xi, ix::xi, ix::xi);
    }

    fom.state_labels = {"alpha",    "xi",    "beta",  "alpha_dot", "xi_dot",  "beta_dot", "z_alpha1",
                        "z_alpha2", "z_xi1", "z_xi2", "z_beta1",   "z_beta2", "g_lift",   "g_hinge"};
    fom.output_labels = {"pitch", "plunge", "flap"};
    return fom;
}

Vector FullOrderModel::residual(const Vector& w, const Vector& uc, const Vector& ud) const {
    Vector r = A * w + Bc * uc + Bg * ud;
    nonlinear.accumulate(w, r);
    return r;
}

}  // namespace gla

#include <gla/error.hpp>
#include <gla/gusts.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace gla {

using std::numbers::pi;

double one_cosine(double t, double w_gmax, double H_g, double U_inf) {
    const double tau = U_inf * t;
    if (tau < 0.0 || tau > 2.0 * H_g) return 0.0;
    return 0.5 * w_gmax * (1.0 - std::cos(pi * tau / H_g));
}

double von_karman_psd(double f_hz, double sigma_g, double L_g, double U_inf) {
    const double x = 1.339 * L_g * 2.0 * pi * f_hz / U_inf;
    const double phi_omega =
        sigma_g * sigma_g * L_g / (pi * U_inf) * (1.0 + 8.0 / 3.0 * x * x) / std::pow(1.0 + x * x, 11.0 / 6.0);
    return 2.0 * pi * phi_omega;
}

namespace {

// Cascade of first-order lead/lag sections (1 + tz s) / (1 + tp s); tz = 0 gives a pure lag.
struct Section {
    double tz, tp;
};

std::vector<Section> nondimensional_sections() {
    // third-order fit of the vertical spectrum, time constants in units of L/U
    std::vector<Section> s{{0.0, 0.0898}, {2.618, 2.083}, {0.1298, 0.823}};
    // s^(1/6) band approximation over x in [wb, wh] with 2N+1 pole/zero pairs
    const double wb = 30.0, wh = 2.0e4, alpha = 1.0 / 6.0;
    const int N = 2;
    for (int k = -N; k <= N; ++k) {
        const double wz = wb * std::pow(wh / wb, (k + N + 0.5 * (1.0 - alpha)) / (2 * N + 1));
        const double wp = wb * std::pow(wh / wb, (k + N + 0.5 * (1.0 + alpha)) / (2 * N + 1));
        s.push_back({1.0 / wz, 1.0 / wp});
    }
    return s;
}

}  // namespace

ShapingFilter von_karman_filter(double sigma_g, double L_g, double U_inf) {
    if (!(L_g > 0.0) || !(U_inf > 0.0)) throw InvalidArgument("Von Karman filter needs positive L_g and U_inf");
    if (sigma_g < 0.0) throw InvalidArgument("turbulence intensity must be non-negative");
    const auto sections = nondimensional_sections();
    const double T = L_g / U_inf;
    const int n = static_cast<int>(sections.size());
    ShapingFilter f;
    f.A = Matrix::Zero(n, n);
    f.B = Vector::Zero(n);
    f.C = RowVector::Zero(n);
    // Section i: x_i' = (u_i - x_i) / tp, y_i = r u_i + (1 - r) x_i with r = tz / tp.
    // u_0 is the noise, u_i = y_{i-1}. Track y_{i-1} as (row of states, noise weight).
    RowVector yin = RowVector::Zero(n);
    double din = 1.0;
    for (int i = 0; i < n; ++i) {
        const double tp = sections[i].tp * T;
        const double r = sections[i].tz / sections[i].tp;
        f.A.row(i) = yin / tp;
        f.A(i, i) -= 1.0 / tp;
        f.B(i) = din / tp;
        RowVector yout = r * yin;
        yout(i) += 1.0 - r;
        yin = yout;
        din *= r;
    }
    f.C = yin;  // din == 0 because the first section is a pure lag
    if (sigma_g == 0.0) {
        f.C.setZero();
        return f;
    }
    const Matrix X = solve_lyapunov(f.A.transpose(), f.B * f.B.transpose());
    const double var = (f.C * X * f.C.transpose())(0, 0);
    f.C *= sigma_g / std::sqrt(var);
    return f;
}

TurbulenceRealization von_karman_realization(double sigma_g, double L_g, double U_inf, double dt, double duration,
                                             std::uint64_t seed) {
    if (!(dt > 0.0) || !(duration > 0.0)) throw InvalidArgument("turbulence needs positive dt and duration");
    if (!(L_g > 0.0) || !(U_inf > 0.0)) throw InvalidArgument("turbulence needs positive L_g and U_inf");
    if (sigma_g < 0.0) throw InvalidArgument("turbulence intensity must be non-negative");

    TurbulenceRealization out;
    out.dt = dt;
    const std::size_t count = static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
    std::ostringstream warn;
    if (duration < 200.0 * L_g / U_inf)
        warn << "duration " << duration << " is below 200 L_g/U_inf = " << 200.0 * L_g / U_inf << "; ";
    const double x_top = 2.0 * pi * (0.2 / dt) * L_g / U_inf;
    if (x_top > 3000.0) warn << "band edge 0.2/dt exceeds the shaping-filter fit range; ";
    out.warning = warn.str();
    out.spectral_check_warning = !out.warning.empty();
    if (sigma_g == 0.0) {
        out.samples.assign(count, 0.0);
        return out;
    }

    // Simulate on a finer grid, low-pass at the output Nyquist frequency, then decimate.
    constexpr int over = 8;
    constexpr int taps = 32 * over + 1;
    constexpr int half = (taps - 1) / 2;
    const double h = dt / over;
    const ShapingFilter f = von_karman_filter(sigma_g, L_g, U_inf);
    const int n = static_cast<int>(f.A.rows());

    Matrix M = Matrix::Zero(2 * n, 2 * n);
    M.topLeftCorner(n, n) = -f.A * h;
    M.topRightCorner(n, n) = f.B * f.B.transpose() * h;
    M.bottomRightCorner(n, n) = f.A.transpose() * h;
    const Matrix E = M.exp();
    const Matrix Ad = E.bottomRightCorner(n, n).transpose();
    Matrix Qd = Ad * E.topRightCorner(n, n);
    Qd = 0.5 * (Qd + Qd.transpose());
    const auto root = [](const Matrix& S) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(S);
        return Matrix(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal());
    };
    const Matrix Lq = root(Qd);
    const Matrix X = solve_lyapunov(f.A.transpose(), f.B * f.B.transpose());
    const Matrix L0 = root(0.5 * (X + X.transpose()));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&]() {
        Vector z(n);
        for (int i = 0; i < n; ++i) z(i) = normal(rng);
        return z;
    };

    const std::size_t fine = (count - 1) * over + taps;
    std::vector<double> s(fine);
    Vector x = L0 * draw();
    for (std::size_t k = 0; k < fine; ++k) {
        s[k] = f.C * x;
        x = Ad * x + Lq * draw();
    }

    std::vector<double> w(taps);
    double sum = 0.0;
    const double fc = 0.5 / over;  // cycles per fine sample
    for (int m = 0; m < taps; ++m) {
        const double t = m - half;
        const double sinc = t == 0.0 ? 2.0 * fc : std::sin(2.0 * pi * fc * t) / (pi * t);
        const double win =
            0.42 - 0.5 * std::cos(2.0 * pi * m / (taps - 1)) + 0.08 * std::cos(4.0 * pi * m / (taps - 1));
        w[m] = sinc * win;
        sum += w[m];
    }
    for (double& v : w) v /= sum;

    out.samples.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t c = j * over + half;
        double acc = 0.0;
        for (int m = 0; m < taps; ++m) acc += w[m] * s[c + half - m];
        out.samples[j] = acc;
    }
    return out;
}

GustKind parse_gust_kind(const std::string& s) {
    if (s == "one-cosine" || s == "one_cosine" || s == "1-cosine") return GustKind::OneCosine;
    if (s == "von-karman" || s == "von_karman") return GustKind::VonKarman;
    if (s == "zero" || s == "none") return GustKind::Zero;
    throw InvalidArgument("unknown gust kind '" + s + "'");
}

std::string to_string(GustKind k) {
    switch (k) {
        case GustKind::OneCosine:
            return "one-cosine";
        case GustKind::VonKarman:
            return "von-karman";
        default:
            return "zero";
    }
}

GustSignal GustSignal::zero() { return GustSignal(); }

GustSignal GustSignal::one_cosine(double w_gmax, double H_g, double U_inf) {
    if (!(H_g > 0.0) || !(U_inf > 0.0)) throw InvalidArgument("one-cosine gust needs positive H_g and U_inf");
    GustSignal g;
    g.kind_ = GustKind::OneCosine;
    g.w_gmax_ = w_gmax;
    g.H_g_ = H_g;
    g.U_inf_ = U_inf;
    return g;
}

GustSignal GustSignal::von_karman(double sigma_g, double L_g, double U_inf, double dt, double duration,
                                  std::uint64_t seed) {
    GustSignal g;
    g.kind_ = GustKind::VonKarman;
    g.U_inf_ = U_inf;
    g.record_ =
        std::make_shared<const TurbulenceRealization>(von_karman_realization(sigma_g, L_g, U_inf, dt, duration, seed));
    return g;
}

GustSignal GustSignal::sampled(double dt, std::vector<double> samples) {
    if (!(dt > 0.0)) throw InvalidArgument("sampled gust needs positive dt");
    TurbulenceRealization r;
    r.dt = dt;
    r.samples = std::move(samples);
    GustSignal g;
    g.kind_ = GustKind::VonKarman;
    g.record_ = std::make_shared<const TurbulenceRealization>(std::move(r));
    return g;
}

double GustSignal::operator()(double t) const {
    switch (kind_) {
        case GustKind::OneCosine:
            return scale_ * gla::one_cosine(t, w_gmax_, H_g_, U_inf_);
        case GustKind::VonKarman: {
            const auto& s = record_->samples;
            if (t < 0.0 || s.empty()) return 0.0;
            const double u = t / record_->dt;
            const auto i = static_cast<std::size_t>(std::floor(u));
            if (i + 1 >= s.size()) return i + 1 == s.size() && u - i < 1e-9 ? scale_ * s.back() : 0.0;
            const double frac = u - static_cast<double>(i);
            return scale_ * (s[i] + frac * (s[i + 1] - s[i]));
        }
        default:
            return 0.0;
    }
}

double GustSignal::active_until() const { return kind_ == GustKind::OneCosine ? 2.0 * H_g_ / U_inf_ : 0.0; }

GustSignal GustSignal::scaled(double c) const {
    GustSignal g = *this;
    g.scale_ *= c;
    return g;
}

GradientSweepResult worst_case_gradient_sweep(const std::function<double(double)>& peak_response,
                                              const std::vector<double>& Hg_range) {
    if (Hg_range.empty()) throw InvalidArgument("gust-gradient sweep needs a non-empty H_g range");
    GradientSweepResult res;
    bool any = false;
    for (double Hg : Hg_range) {
        if (!(Hg > 0.0)) throw InvalidArgument("gust gradients must be positive");
        GradientSweepRow row;
        row.H_g = Hg;
        row.peak = 0.0;
        try {
            row.peak = peak_response(Hg);
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
        if (row.ok && (!any || row.peak > res.peak_star)) {
            res.peak_star = row.peak;
            res.H_g_star = Hg;
            any = true;
        }
        res.table.push_back(row);
    }
    if (!any) throw NumericalError("every point of the gust-gradient sweep failed");
    return res;
}

void write_gust_csv(std::ostream& os, const GustSignal& g, double dt, double duration) {
    const std::size_t count = static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
    os << "t,w_g\n" << std::setprecision(17);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) * dt;
        os << t << ',' << g(t) << '\n';
    }
}

}  // namespace gla

#include "common.hpp"

#include "run_config.hpp"

#include <gla/gusts.hpp>

#include <oracles.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace acceptance {

using gla::Matrix;
using gla::Vector;
namespace fs = std::filesystem;

namespace {

int count_near(const Matrix& A, gla::Complex target, double tol) {
    Eigen::EigenSolver<Matrix> es(A, false);
    int n = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) n += std::abs(es.eigenvalues()(i) - target) <= tol;
    return n;
}

struct SweepPoint {
    double gamma, reduction, max_flap;
    bool ok;
};

std::vector<SweepPoint> run_gamma_sweep(const std::string& config, const TempDir& dir, std::string& error) {
    const int rc = run_cli("sweep --config \"" + config + "\" --out \"" + dir.file("sweep") + "\"");
    if (rc != 0) {
        error = "sweep exited with status " + std::to_string(rc);
        return {};
    }
    const auto csv = read_csv(dir.file("sweep/sweep.csv"));
    std::vector<SweepPoint> pts;
    const int status = csv.column("status");
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        const bool ok = csv.rows[i][static_cast<std::size_t>(status)] == "ok";
        pts.push_back({csv.number(i, "gamma"), ok ? csv.number(i, "reduction_percent") : 0.0,
                       ok ? csv.number(i, "max_flap") : 0.0, ok});
    }
    return pts;
}

std::string describe(const std::vector<SweepPoint>& pts, bool flap) {
    std::string s;
    for (const auto& p : pts) {
        s += "g=" + fmt(p.gamma) + ": " + fmt(p.reduction, 4) + "%";
        if (flap) s += " / " + fmt(p.max_flap, 4) + " deg";
        s += "; ";
    }
    if (!s.empty()) s.resize(s.size() - 2);
    return s;
}

// Non-decreasing in the sweep order.
bool non_decreasing(const std::vector<SweepPoint>& pts, double SweepPoint::* field) {
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].*field < pts[i - 1].*field) return false;
    return true;
}

bool same_csv_files(const std::string& a, const std::string& b, int& compared, std::string& differing) {
    bool same = true;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        const auto rel = fs::relative(entry.path(), a);
        ++compared;
        const auto other = fs::path(b) / rel;
        if (!fs::exists(other) || gla::read_file(entry.path().string()) != gla::read_file(other.string())) {
            same = false;
            differing += rel.string() + " ";
        }
    }
    return same;
}

}  // namespace

Outcome rom_fidelity() {
    gla::SimulationConfig cfg;
    cfg.duration = 1100.0;
    cfg.nonlinear = true;
    const auto v = gla::validate_rom(default_fom(), default_rom(), gla::GustSignal::one_cosine(0.14, 55.0, 1.0), cfg);
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < 2; ++i) {
        pass &= v.peak_error_percent[i] <= 5.0 && v.nrms_percent[i] <= 2.0;
        detail += v.labels[i] + " peak " + fmt(v.peak_error_percent[i]) + "% rms " + fmt(v.nrms_percent[i]) + "%; ";
    }
    return {pass, detail + "limits 5% / 2%"};
}

Outcome gamma_trend() {
    TempDir dir("gamma");
    std::string error;
    const auto pts = run_gamma_sweep(config_path("gamma_sweep_3dof.json"), dir, error);
    if (pts.empty()) return {false, error.empty() ? "empty sweep" : error};
    bool all_ok = true, beats_open = true;
    for (const auto& p : pts) {
        all_ok &= p.ok;
        beats_open &= p.reduction > 0.0;
    }
    const bool pass = pts.size() == 3 && all_ok && beats_open && non_decreasing(pts, &SweepPoint::reduction) &&
                      non_decreasing(pts, &SweepPoint::max_flap);
    return {pass, describe(pts, true)};
}

Outcome kussner_eigenvalues() {
    const gla::Complex k(-0.1393, 0.0);
    const int in_fom = count_near(default_fom().A, k, 1e-6);
    const int in_rom = count_near(default_rom().A, k, 1e-6);
    return {in_fom == 2 && in_rom == 2, "eigenvalues at -0.1393 +- 1e-6: full model " + std::to_string(in_fom) +
                                            ", 8-state ROM " + std::to_string(in_rom)};
}

Outcome one_cosine_exactness() {
    double worst = 0.0;
    const double cases[][3] = {{0.14, 55.0, 1.0}, {0.3, 12.5, 2.0}, {1.0, 100.0, 59.0}, {0.05, 7.0, 0.3}};
    for (const auto& c : cases) {
        const double w = c[0], H = c[1], U = c[2];
        worst = std::max(worst, std::abs(gla::one_cosine(0.0, w, H, U)));
        worst = std::max(worst, std::abs(gla::one_cosine(H / U, w, H, U) - w) / w);
        worst = std::max(worst, std::abs(gla::one_cosine(2.0 * H / U, w, H, U)) / w);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {worst <= 2.0 * eps, "max deviation " + fmt(worst) + " (machine epsilon " + fmt(eps) + ")"};
}

Outcome von_karman_generator() {
    Stopwatch sw;
    const double sigma = 1.0, L = 200.0, U = 59.0, dt = 0.05, duration = 2000.0;
    const int nperseg = 8192;
    double mean_var = 0.0;
    std::vector<double> psd;
    std::vector<double> freqs;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = gla::von_karman_realization(sigma, L, U, dt, duration, seed);
        mean_var += oracle::sample_variance(r.samples) / 20.0;
        const auto w = oracle::welch(r.samples, dt, nperseg);
        if (psd.empty()) {
            psd.assign(w.p.size(), 0.0);
            freqs = w.f;
        }
        for (std::size_t i = 0; i < w.p.size(); ++i) psd[i] += w.p[i] / 20.0;
    }
    const double lo = 0.1 * U / L, hi = 0.2 / dt;
    double worst_db = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] < lo || freqs[i] > hi) continue;
        ++bins;
        worst_db = std::max(worst_db, std::abs(10.0 * std::log10(psd[i] / gla::von_karman_psd(freqs[i], sigma, L, U))));
    }
    const bool spectral = mean_var >= 0.9 && mean_var <= 1.1 && bins > 0 && worst_db <= 3.0;

    TempDir dir("stochastic");
    std::string error;
    const auto pts = run_gamma_sweep(config_path("stochastic_3dof.json"), dir, error);
    bool ordered = pts.size() == 3 && non_decreasing(pts, &SweepPoint::reduction);
    for (const auto& p : pts) ordered &= p.ok;
    const double t = sw.seconds();
    return {spectral && ordered && t < 180.0, "mean variance " + fmt(mean_var, 4) + ", max PSD deviation " +
                                                  fmt(worst_db) + " dB over " + std::to_string(bins) + " bins in [" +
                                                  fmt(lo) + ", " + fmt(hi) + "] Hz; stochastic sweep " +
                                                  (error.empty() ? describe(pts, false) : error)};
}

Outcome integrator_order() {
    const auto& rom = default_rom();
    const gla::Plant plant = gla::Plant::from_rom(rom);
    const auto q = gla::cli::q_preset("default", 8);
    const auto ctrl = gla::Controller::make(plant, gla::build_reference_model(rom, gla::DampingSpec{}),
                                            Vector::Map(q.data(), 8).asDiagonal(), 0.5);
    const auto gust = gla::GustSignal::one_cosine(0.14, 55.0, 1.0);
    auto end_state = [&](double dt) {
        gla::SimulationConfig c;
        c.dt = dt;
        c.duration = 200.0;
        c.nonlinear = false;
        c.stride = 1000;
        const auto tr = gla::integrate_closed_loop(plant, ctrl, gust, c);
        Vector s(16 + 9);
        s << tr.x.back(), tr.xm.back(), tr.theta.back().col(0);
        return s;
    };
    const double dt = 0.01;
    const Vector a = end_state(dt), b = end_state(dt / 2), c = end_state(dt / 4);
    const double ratio = (a - b).norm() / (b - c).norm();
    return {ratio >= 10.0 && ratio <= 24.0, "ratio " + fmt(ratio, 4) + " at dt = 0.01 (nominal 16, band [10, 24])"};
}

Outcome determinism() {
    TempDir dir("det");
    const std::pair<std::string, std::string> runs[] = {{"simulate", "simulate_3dof.json"},
                                                        {"gust-gen", "von_karman_gust.json"}};
    bool pass = true;
    int compared = 0;
    std::string differing;
    for (const auto& [cmd, config] : runs) {
        const auto a = dir.file(cmd + "_a"), b = dir.file(cmd + "_b");
        const std::string base = cmd + " --config \"" + config_path(config) + "\" --seed 11 --out ";
        if (run_cli(base + "\"" + a + "\"") != 0 || run_cli(base + "\"" + b + "\"") != 0)
            return {false, cmd + " did not exit cleanly"};
        pass &= same_csv_files(a, b, compared, differing);
    }
    pass &= compared > 0;
    return {pass, std::to_string(compared) + " CSV files compared bytewise" +
                      (differing.empty() ? ", all identical" : ", differing: " + differing)};
}

}  // namespace acceptance

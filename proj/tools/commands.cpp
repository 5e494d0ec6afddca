#include "commands.hpp"
#include "plots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <thread>

namespace gla::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kRad2Deg = 57.295779513082320876798154814105;

bool is_angle(const std::string& label) {
    return label == "pitch" || label == "flap" || label == "alpha" || label == "beta";
}

void save_text(const std::string& dir, const std::string& name, const std::string& text) {
    write_file((fs::path(dir) / name).string(), text);
}

template <class Fn>
void save_stream(const std::string& dir, const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    save_text(dir, name, os.str());
}

void save_trace(const std::string& dir, const std::string& name, const SimulationTrace& tr) {
    save_stream(dir, name, [&](std::ostream& os) { write_trace_csv(os, tr, true); });
}

void report_warnings(std::ostream& log, std::ostream& report, const std::vector<std::string>& w) {
    for (const auto& s : w) {
        log << "warning: " << s << "\n";
        report << "warning: " << s << "\n";
    }
}

std::string output_label(const Plant& plant, int row) {
    if (row >= plant.C().rows())
        throw ConfigError("output.output: plant has " + std::to_string(plant.C().rows()) + " outputs, requested row " +
                          std::to_string(row));
    const auto& l = plant.output_labels();
    return row < static_cast<int>(l.size()) ? l[static_cast<std::size_t>(row)] : "y" + std::to_string(row);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string complex_text(Complex z) {
    std::ostringstream os;
    os << std::setprecision(8) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "j";
    return os.str();
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results are index-addressed by the caller.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

void write_mode_table(std::ostream& os, const ReducedOrderModel& rom) {
    os << "retained modes (n = " << rom.states() << ")\n";
    os << "  eigenvalue                      kind         freq        zeta        |Psi B_g|   |Psi B_c|\n";
    for (const auto& m : rom.modes) {
        os << "  " << std::left << std::setw(32) << complex_text(m.eigenvalue) << std::setw(13)
           << (m.kind == ModeKind::Real ? "real" : "oscillatory") << std::right << std::setprecision(5) << std::setw(10)
           << m.frequency << "  " << std::setw(10) << m.damping_ratio << "  " << std::setw(10) << m.gust_participation
           << "  " << std::setw(10) << m.control_participation << "\n";
    }
}

struct Fidelity {
    RomValidation v;
    bool pass = true;
};

Fidelity check_fidelity(const RunConfig& cfg, const Model& model, std::ostream& report) {
    Fidelity f;
    const auto gust = cfg.make_gust(cfg.sim.duration);
    f.v = validate_rom(*model.fom, *model.rom, gust, cfg.sim);
    report << "ROM fidelity against the full-order model (" << to_string(gust.kind()) << " gust)\n";
    report << "  output      peak_full       peak_rom        peak_err_%   nrms_%    (angles in deg)\n";
    for (std::size_t i = 0; i < f.v.labels.size(); ++i) {
        const bool ok = f.v.peak_error_percent[i] <= cfg.validation.peak_tolerance_percent &&
                        f.v.nrms_percent[i] <= cfg.validation.rms_tolerance_percent;
        f.pass = f.pass && ok;
        const double s = is_angle(f.v.labels[i]) ? kRad2Deg : 1.0;
        report << "  " << std::left << std::setw(10) << f.v.labels[i] << std::right << std::setprecision(6)
               << std::setw(14) << f.v.peak_full[i] * s << "  " << std::setw(14) << f.v.peak_rom[i] * s << "  "
               << std::setw(10) << f.v.peak_error_percent[i] << "  " << std::setw(8) << f.v.nrms_percent[i] << "  "
               << (ok ? "PASS" : "FAIL") << "\n";
    }
    report << "  tolerances: peak " << cfg.validation.peak_tolerance_percent << "%, nrms "
           << cfg.validation.rms_tolerance_percent << "%\n";
    return f;
}

void write_fidelity_csv(std::ostream& os, const RomValidation& v) {
    os << std::setprecision(17) << "t";
    for (const auto& l : v.labels) os << ",full_" << l << ",rom_" << l;
    os << "\n";
    const std::size_t n = std::min(v.full.size(), v.reduced.size());
    for (std::size_t k = 0; k < n; ++k) {
        os << v.full.t[k];
        for (std::size_t i = 0; i < v.labels.size(); ++i) {
            const double s = is_angle(v.labels[i]) ? kRad2Deg : 1.0;
            os << ',' << v.full.y[k](static_cast<Eigen::Index>(i)) * s << ','
               << v.reduced.y[k](static_cast<Eigen::Index>(i)) * s;
        }
        os << "\n";
    }
}

std::string axis_label(const std::string& l) { return is_angle(l) ? l + " (deg)" : l; }

// Angle outputs are reported in degrees at the command-line boundary.
GlaMetrics metrics(const SimulationTrace& ol, const SimulationTrace& cl, int out, bool flap_deg) {
    auto m = compute_metrics(ol, cl, out, flap_deg);
    if (is_angle(m.output_label)) {
        m.peak_open *= kRad2Deg;
        m.peak_closed *= kRad2Deg;
        m.rms_open *= kRad2Deg;
        m.rms_closed *= kRad2Deg;
    }
    return m;
}

}  // namespace

int cmd_rom_build(const RunConfig& cfg, std::ostream& log) {
    if (cfg.plant.source == PlantSource::Rom) throw ConfigError("rom-build needs plant.source aerofoil or bundle");
    if (!cfg.rom.enabled) throw ConfigError("rom-build with rom.enabled = false");
    const auto dir = prepare_output(cfg);
    RunConfig fresh = cfg;
    fresh.rom.cache.clear();  // always rebuild here
    const auto model = load_model(fresh, true);

    const std::string rom_path = cfg.rom.cache.empty() ? (fs::path(dir) / "rom.cbor").string() : cfg.rom.cache;
    save_rom(*model.rom, RomFileInfo{model.source_path, model.source_hash}, rom_path);

    std::ostringstream report;
    report << "ROM build\n";
    report << "  source: " << (model.source_path.empty() ? "<built-in aerofoil defaults>" : model.source_path) << "\n";
    report << "  source sha256: " << model.source_hash << "\n";
    report << "  full order N = " << model.fom->states() << ", reduced order n = " << model.rom->states() << "\n";
    report << "  ROM file: " << fs::path(rom_path).filename().string() << "\n";
    report_warnings(log, report, model.warnings);
    write_mode_table(report, *model.rom);
    const auto fid = check_fidelity(cfg, model, report);
    report_warnings(log, report, fid.v.full.warnings);
    report << "result: " << (fid.pass ? "PASS" : "FAIL") << "\n";

    save_stream(dir, "rom_validation.csv", [&](std::ostream& os) { write_fidelity_csv(os, fid.v); });
    std::vector<PlotPanel> panels;
    for (const auto& l : fid.v.labels)
        panels.push_back({"full-order vs reduced-order: " + l,
                          "t",
                          axis_label(l),
                          {{"rom_validation.csv", "t", "full_" + l, "full order"},
                           {"rom_validation.csv", "t", "rom_" + l, "reduced order", "lines dashtype 2"}}});
    save_text(dir, "rom_validation.gp", gnuplot_script("rom_validation", panels));
    save_text(dir, "rom_report.txt", report.str());
    log << report.str();
    return fid.pass ? kOk : kValidationFailed;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    const auto dir = prepare_output(cfg);
    const auto model = load_model(cfg, false);
    const int out = cfg.output.output;
    const auto label = output_label(model.plant, out);
    const auto gust = cfg.make_gust(cfg.sim.duration);

    std::ostringstream report;
    report << "simulation: " << to_string(gust.kind()) << " gust, dt " << cfg.sim.dt << ", duration "
           << cfg.sim.duration << ", seed " << cfg.seed << ", " << (cfg.sim.nonlinear ? "nonlinear" : "linear")
           << " plant, " << model.plant.states() << " states\n";
    report_warnings(log, report, model.warnings);
    if (const auto* rec = gust.realization(); rec && rec->spectral_check_warning) {
        log << "warning: " << rec->warning << "\n";
        report << "warning: " << rec->warning << "\n";
    }

    auto diverged = [&](const SimulationDiverged& e, const char* file) {
        save_trace(dir, file, e.partial());
        report << "DIVERGED: " << e.what() << "\n  partial trace kept in " << file << " (" << e.partial().size()
               << " samples)\n";
        save_text(dir, "summary.txt", report.str());
        log << report.str();
        return kDiverged;
    };

    SimulationTrace ol;
    try {
        ol = integrate_open_loop(model.plant, gust, cfg.sim);
    } catch (const SimulationDiverged& e) {
        return diverged(e, "open_loop.csv");
    }
    report_warnings(log, report, ol.warnings);
    if (cfg.output.write_traces) save_trace(dir, "open_loop.csv", ol);

    std::vector<PlotPanel> panels{
        {"output " + label, "t", axis_label(label), {{"open_loop.csv", "t", label, "open loop"}}}};
    int code = kOk;
    if (cfg.controller.enabled) {
        const auto setup = make_controller(cfg, model, cfg.controller.gamma);
        const auto& ctrl = setup.controller;
        report << "controller: gamma " << cfg.controller.gamma << ", Gamma "
               << (cfg.controller.gamma_mode == GammaMode::ScaledQ ? "gamma*blockdiag(Q, I)" : "gamma*I")
               << ", Q preset " << (cfg.controller.q_diagonal.empty() ? cfg.controller.q_preset : "custom")
               << ", matching " << (setup.matching.exact ? "exact" : "approximate") << " (residual "
               << setup.matching.residual_x << ")\n";
        if (setup.zero_correction) {
            report << "zero correction on output " << label << ":";
            for (auto z : setup.zero_correction->zeros_before) report << " " << complex_text(z);
            report << " ->";
            for (auto z : setup.zero_correction->zeros_after) report << " " << complex_text(z);
            report << "\n";
        }
        SimulationTrace cl;
        try {
            cl = integrate_closed_loop(model.plant, ctrl, gust, cfg.sim);
        } catch (const SimulationDiverged& e) {
            return diverged(e, "closed_loop.csv");
        }
        report_warnings(log, report, cl.warnings);
        if (cfg.output.write_traces) save_trace(dir, "closed_loop.csv", cl);

        const auto met = metrics(ol, cl, out, cfg.output.flap_in_degrees);
        save_stream(dir, "metrics.csv",
                    [&](std::ostream& os) { write_metrics_csv(os, {met}, {"gamma=" + fmt(cfg.controller.gamma)}); });
        report << metrics_summary(met) << "\n";
        if (cl.monitor) {
            const auto& m = *cl.monitor;
            report << "Lipschitz monitor: L_F " << fmt(m.L_F) << ", max ratio " << fmt(m.max_ratio) << ", "
                   << (m.violated ? "VIOLATED at t = " + fmt(m.first_violation_time) : std::string("within bound"))
                   << " (" << m.samples << " samples, " << m.skipped << " skipped)\n";
        }
        if (cfg.sim.certificate) {
            const auto mode = ctrl.theta_star ? CertificateMode::Full : CertificateMode::ErrorOnly;
            const auto cert = lyapunov_certificate(cl, ctrl.design, ctrl.theta_star, mode);
            std::ostringstream c;
            c << "Lyapunov certificate: " << (cert.pass ? "PASS" : "FAIL") << "\n"
              << "  mode: "
              << (mode == CertificateMode::Full ? "full (e and parameter error)"
                                                : "error term only (theta* unavailable, parameter term omitted)")
              << "\n  V(0) = " << fmt(cert.V.empty() ? 0.0 : cert.V.front())
              << "\n  largest step increase = " << fmt(cert.max_increase) << "\n";
            if (cert.first_violation >= 0) c << "  first violation at sample " << cert.first_violation << "\n";
            save_text(dir, "certificate.txt", c.str());
            report << c.str();
            if (!cert.pass) code = kValidationFailed;
        }
        panels[0].series.push_back({"closed_loop.csv", "t", label, "closed loop"});
        panels.push_back({"flap command",
                          "t",
                          cfg.output.flap_in_degrees ? "u_c (deg)" : "u_c (rad)",
                          {{"closed_loop.csv", "t", "u_c", "u_c"}}});
    }
    panels.push_back({"gust input", "t", "u_d", {{"open_loop.csv", "t", "u_d", "u_d"}}});
    if (cfg.output.write_traces) save_text(dir, "simulate.gp", gnuplot_script("simulate", panels));
    save_text(dir, "summary.txt", report.str());
    log << report.str();
    return code;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    if (cfg.sweep.grid.empty()) throw ConfigError("sweep.grid: needs at least one point");
    const auto dir = prepare_output(cfg);
    const auto model = load_model(cfg, false);
    const int out = cfg.output.output;
    const auto label = output_label(model.plant, out);
    const int npts = static_cast<int>(cfg.sweep.grid.size());
    std::ostringstream report;
    report_warnings(log, report, model.warnings);
    if (cfg.output.write_traces) fs::create_directories(fs::path(dir) / "points");

    struct Point {
        bool ok = false;
        std::string error;
        GlaMetrics met;
        double peak_open = 0.0, peak_closed = 0.0;
    };
    std::vector<Point> pts(static_cast<std::size_t>(npts));

    if (cfg.sweep.axis == "gamma") {
        if (!cfg.controller.enabled) throw ConfigError("a gamma sweep needs controller.enabled = true");
        for (double g : cfg.sweep.grid)
            if (g < 0.0) throw ConfigError("sweep.grid: gamma values must be non-negative");
        const auto gust = cfg.make_gust(cfg.sim.duration);
        SimulationTrace ol;
        try {
            ol = integrate_open_loop(model.plant, gust, cfg.sim);
        } catch (const SimulationDiverged& e) {
            save_trace(dir, "open_loop.csv", e.partial());
            log << "open loop diverged: " << e.what() << "\n";
            return kDiverged;
        }
        if (cfg.output.write_traces) save_trace(dir, "open_loop.csv", ol);
        parallel_for(npts, cfg.workers, [&](int i) {
            auto& p = pts[static_cast<std::size_t>(i)];
            const double g = cfg.sweep.grid[static_cast<std::size_t>(i)];
            std::ostringstream name;
            name << "points/gamma_" << std::setw(3) << std::setfill('0') << i << ".csv";
            try {
                const auto setup = make_controller(cfg, model, g);
                const auto cl = integrate_closed_loop(model.plant, setup.controller, gust, cfg.sim);
                p.met = metrics(ol, cl, out, cfg.output.flap_in_degrees);
                p.ok = true;
                if (cfg.output.write_traces) save_trace(dir, name.str(), cl);
            } catch (const SimulationDiverged& e) {
                p.error = std::string("diverged: ") + e.what();
                if (cfg.output.write_traces) save_trace(dir, name.str(), e.partial());
            } catch (const Error& e) {
                p.error = e.what();
            }
        });
        save_stream(dir, "sweep.csv", [&](std::ostream& os) {
            os << std::setprecision(17)
               << "index,gamma,status,output,peak_open,peak_closed,reduction_percent,max_flap,flap_unit,rms_open,"
                  "rms_closed,settled,message\n";
            for (int i = 0; i < npts; ++i) {
                const auto& p = pts[static_cast<std::size_t>(i)];
                os << i << ',' << cfg.sweep.grid[static_cast<std::size_t>(i)] << ',' << (p.ok ? "ok" : "failed") << ','
                   << label << ',';
                if (p.ok)
                    os << p.met.peak_open << ',' << p.met.peak_closed << ',' << p.met.reduction_percent << ','
                       << p.met.max_flap << ',' << (p.met.flap_in_degrees ? "deg" : "rad") << ',' << p.met.rms_open
                       << ',' << p.met.rms_closed << ',' << (p.met.settled ? 1 : 0) << ",\n";
                else
                    os << ",,,,,,,," << '"' << p.error << "\"\n";
            }
        });
        report << "gamma sweep on output " << label << "\n";
        for (int i = 0; i < npts; ++i) {
            const auto& p = pts[static_cast<std::size_t>(i)];
            report << "  gamma " << cfg.sweep.grid[static_cast<std::size_t>(i)] << ": "
                   << (p.ok ? metrics_summary(p.met) : "FAILED " + p.error) << "\n";
        }
        save_text(dir, "sweep.gp",
                  gnuplot_script("sweep", {{"reduction vs gamma",
                                            "gamma",
                                            "reduction (%)",
                                            {{"sweep.csv", "gamma", "reduction_percent", "reduction", "linespoints"}}},
                                           {"actuator demand vs gamma",
                                            "gamma",
                                            cfg.output.flap_in_degrees ? "max flap (deg)" : "max flap (rad)",
                                            {{"sweep.csv", "gamma", "max_flap", "max flap", "linespoints"}}}}));
    } else {
        for (double h : cfg.sweep.grid)
            if (!(h > 0.0)) throw ConfigError("sweep.grid: gust gradients must be positive");
        std::optional<ControllerSetup> setup;
        if (cfg.controller.enabled) setup = make_controller(cfg, model, cfg.controller.gamma);
        parallel_for(npts, cfg.workers, [&](int i) {
            auto& p = pts[static_cast<std::size_t>(i)];
            const double Hg = cfg.sweep.grid[static_cast<std::size_t>(i)];
            auto sc = cfg.sim;
            sc.duration = cfg.duration_for(Hg);
            const auto gust = GustSignal::one_cosine(cfg.gust.w_gmax, Hg, cfg.gust.U_inf);
            try {
                const auto ol = integrate_open_loop(model.plant, gust, sc);
                if (setup) {
                    const auto cl = integrate_closed_loop(model.plant, setup->controller, gust, sc);
                    p.met = metrics(ol, cl, out, cfg.output.flap_in_degrees);
                } else {
                    p.met = metrics(ol, ol, out, cfg.output.flap_in_degrees);
                }
                p.ok = true;
            } catch (const Error& e) {
                p.error = e.what();
            }
        });
        // worst-case search over the precomputed points, in grid order
        int cursor = 0;
        const auto res = worst_case_gradient_sweep(
            [&](double) {
                const auto& p = pts[static_cast<std::size_t>(cursor++)];
                if (!p.ok) throw Error(p.error);
                return setup ? p.met.peak_closed : p.met.peak_open;
            },
            cfg.sweep.grid);
        const bool any_ok = std::any_of(pts.begin(), pts.end(), [](const Point& p) { return p.ok; });
        save_stream(dir, "sweep.csv", [&](std::ostream& os) {
            os << std::setprecision(17)
               << "index,H_g,status,output,peak_open,peak_closed,reduction_percent,max_flap,flap_unit,worst_case,"
                  "message\n";
            for (int i = 0; i < npts; ++i) {
                const auto& p = pts[static_cast<std::size_t>(i)];
                const double Hg = cfg.sweep.grid[static_cast<std::size_t>(i)];
                os << i << ',' << Hg << ',' << (p.ok ? "ok" : "failed") << ',' << label << ',';
                if (p.ok)
                    os << p.met.peak_open << ',' << (setup ? fmt(p.met.peak_closed) : "") << ','
                       << (setup ? fmt(p.met.reduction_percent) : "") << ',' << (setup ? fmt(p.met.max_flap) : "")
                       << ',' << (p.met.flap_in_degrees ? "deg" : "rad") << ','
                       << (any_ok && Hg == res.H_g_star ? 1 : 0) << ",\n";
                else
                    os << ",,,,,0," << '"' << p.error << "\"\n";
            }
        });
        report << "gust-gradient sweep on output " << label << " ("
               << (setup ? "closed loop, gamma " + fmt(cfg.controller.gamma) : std::string("open loop")) << ")\n";
        for (int i = 0; i < npts; ++i) {
            const auto& p = pts[static_cast<std::size_t>(i)];
            report << "  H_g " << cfg.sweep.grid[static_cast<std::size_t>(i)] << ": "
                   << (p.ok ? "peak " + fmt(setup ? p.met.peak_closed : p.met.peak_open) : "FAILED " + p.error) << "\n";
        }
        if (any_ok) report << "worst case: H_g = " << res.H_g_star << ", peak " << fmt(res.peak_star) << "\n";
        std::vector<PlotSeries> s{{"sweep.csv", "H_g", "peak_open", "open loop", "linespoints"}};
        if (setup) s.push_back({"sweep.csv", "H_g", "peak_closed", "closed loop", "linespoints"});
        save_text(dir, "sweep.gp",
                  gnuplot_script("sweep", {{"peak response vs gust gradient", "H_g", axis_label(label), s}}));
    }
    const int failed = static_cast<int>(std::count_if(pts.begin(), pts.end(), [](const Point& p) { return !p.ok; }));
    report << failed << " of " << npts << " points failed\n";
    save_text(dir, "sweep_report.txt", report.str());
    log << report.str();
    return kOk;
}

int cmd_gust_gen(const RunConfig& cfg, std::ostream& log) {
    const auto dir = prepare_output(cfg);
    const auto gust = cfg.make_gust(cfg.sim.duration);
    save_stream(dir, "gust.csv", [&](std::ostream& os) { write_gust_csv(os, gust, cfg.sim.dt, cfg.sim.duration); });
    std::ostringstream report;
    report << "gust: " << to_string(gust.kind()) << ", dt " << cfg.sim.dt << ", duration " << cfg.sim.duration << "\n";
    std::vector<PlotPanel> panels{{"gust velocity", "t", "w_g", {{"gust.csv", "t", "w_g", "w_g"}}}};
    if (gust.kind() == GustKind::OneCosine) {
        report << "  w_gmax " << cfg.gust.w_gmax << ", H_g " << cfg.gust.H_g << ", U_inf " << cfg.gust.U_inf
               << ", active until t = " << gust.active_until() << "\n";
    } else if (const auto* rec = gust.realization()) {
        const auto filt = von_karman_filter(*cfg.gust.sigma, *cfg.gust.length_scale, cfg.gust.U_inf);
        double mean = 0.0, var = 0.0;
        for (double v : rec->samples) mean += v;
        mean /= static_cast<double>(rec->samples.size());
        for (double v : rec->samples) var += (v - mean) * (v - mean);
        var /= static_cast<double>(rec->samples.size() > 1 ? rec->samples.size() - 1 : 1);
        report << "  sigma " << *cfg.gust.sigma << ", L " << *cfg.gust.length_scale << ", U_inf " << cfg.gust.U_inf
               << ", seed " << cfg.seed << "\n  shaping filter order " << filt.A.rows() << "\n  samples "
               << rec->samples.size() << ", sample mean " << fmt(mean) << ", sample variance " << fmt(var)
               << " (target " << fmt(*cfg.gust.sigma * *cfg.gust.sigma) << ")\n";
        if (rec->spectral_check_warning) {
            report << "warning: " << rec->warning << "\n";
            log << "warning: " << rec->warning << "\n";
        }
        // analytic one-sided spectrum on a log grid up to the Nyquist frequency
        const double f_lo = 0.01 * cfg.gust.U_inf / *cfg.gust.length_scale, f_hi = 0.5 / cfg.sim.dt;
        save_stream(dir, "gust_psd_analytic.csv", [&](std::ostream& os) {
            os << std::setprecision(17) << "f,psd\n";
            const int pts = 400;
            for (int k = 0; k <= pts; ++k) {
                const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(k) / pts);
                os << f << ',' << von_karman_psd(f, *cfg.gust.sigma, *cfg.gust.length_scale, cfg.gust.U_inf) << "\n";
            }
        });
        panels.push_back({"analytic one-sided spectrum",
                          "f (1/time)",
                          "S(f)",
                          {{"gust_psd_analytic.csv", "f", "psd", "Von Karman"}},
                          true});
    }
    save_text(dir, "gust.gp", gnuplot_script("gust", panels));
    save_text(dir, "gust_report.txt", report.str());
    log << report.str();
    return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
    const auto dir = prepare_output(cfg);
    std::ostringstream report;
    bool pass = true;
    auto line = [&](bool ok, const std::string& what, const std::string& detail) {
        pass = pass && ok;
        report << (ok ? "PASS " : "FAIL ") << what << (detail.empty() ? "" : ": " + detail) << "\n";
    };
    line(true, "config", cfg.origin.empty() ? "defaults" : cfg.origin);

    const bool have_fom = cfg.plant.source != PlantSource::Rom;
    const auto model = load_model(cfg, have_fom);
    report_warnings(log, report, model.warnings);
    if (model.fom) {
        const double a = spectral_abscissa(model.fom->A);
        line(a < 0.0, "full-order plant stable", "spectral abscissa " + fmt(a));
    }
    if (!cfg.rom.cache.empty() && fs::exists(cfg.rom.cache)) {
        const auto lr = load_rom(cfg.rom.cache);
        line(lr.info.source_hash == model.source_hash && !lr.stale, "ROM cache up to date",
             lr.info.source_hash == model.source_hash
                 ? cfg.rom.cache
                 : "built from a different parameter file (hash " + lr.info.source_hash.substr(0, 12) + ")");
    }
    if (model.rom) {
        const double a = spectral_abscissa(model.rom->A);
        line(a < 0.0, "ROM stable", "spectral abscissa " + fmt(a));
        if (model.fom) {
            std::ostringstream fr;
            const auto fid = check_fidelity(cfg, model, fr);
            std::string detail;
            for (std::size_t i = 0; i < fid.v.labels.size(); ++i)
                detail += (i ? ", " : "") + fid.v.labels[i] + " peak " + fmt(fid.v.peak_error_percent[i]) + "% nrms " +
                          fmt(fid.v.nrms_percent[i]) + "%";
            line(fid.pass, "ROM fidelity", detail);
        }
    }
    if (cfg.controller.enabled && model.rom) {
        const auto setup = make_controller(cfg, model, cfg.controller.gamma);
        const auto& d = setup.controller.design;
        const auto& Am = setup.controller.reference.Am;
        const double res = (Am.transpose() * d.P + d.P * Am + d.Q).norm() / d.Q.norm();
        line(res <= 1e-10, "Lyapunov equation", "relative residual " + fmt(res));
        line(spectral_abscissa(Am) < 0.0, "reference model Hurwitz", "spectral abscissa " + fmt(spectral_abscissa(Am)));
        line(true, "model matching",
             std::string(setup.matching.exact ? "exact" : "not exactly feasible") + ", residual " +
                 fmt(setup.matching.residual_x) + ", controllability rank " +
                 std::to_string(setup.matching.controllability_rank));
        line(true, "Lipschitz bound", "L_F = " + fmt(lipschitz_bound(d)));
        if (setup.zero_correction) {
            bool lhp = true;
            for (auto z : setup.zero_correction->zeros_after) lhp = lhp && z.real() < 0.0;
            line(lhp, "minimum-phase output", std::to_string(setup.zero_correction->zeros_after.size()) + " zeros");
        }
    }
    report << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    save_text(dir, "validation_report.txt", report.str());
    log << report.str();
    return pass ? kOk : kValidationFailed;
}

}  // namespace gla::cli

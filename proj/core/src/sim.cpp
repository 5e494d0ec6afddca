#include <gla/error.hpp>
#include <gla/sim.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace gla {

namespace {

constexpr double rad2deg = 180.0 / std::numbers::pi;

bool is_angle_label(const std::string& s) { return s == "pitch" || s == "flap" || s == "alpha" || s == "beta"; }

double max_abs_eigenvalue(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    return A.eigenvalues().cwiseAbs().maxCoeff();
}

std::size_t step_count(const SimulationConfig& cfg) {
    return static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
}

void check_dt(const SimulationConfig& cfg, const Matrix& A, std::vector<std::string>& warnings) {
    const double lam = max_abs_eigenvalue(A);
    if (lam > 0.0 && cfg.dt > 0.1 / lam) {
        std::ostringstream os;
        os << "dt " << cfg.dt << " exceeds the stability heuristic 0.1/max|lambda| = " << 0.1 / lam;
        warnings.push_back(os.str());
    }
}

}  // namespace

Plant::Plant(Matrix A, Matrix Bc, Matrix Bg, Matrix C, std::vector<std::string> output_labels)
    : A_(std::move(A)), Bc_(std::move(Bc)), Bg_(std::move(Bg)), C_(std::move(C)), labels_(std::move(output_labels)) {
    const auto n = A_.rows();
    if (A_.cols() != n || Bc_.rows() != n || Bg_.rows() != n || C_.cols() != n)
        throw InvalidArgument("plant matrices have inconsistent dimensions");
    if (labels_.empty())
        for (Eigen::Index i = 0; i < C_.rows(); ++i) labels_.push_back("y" + std::to_string(i));
    if (static_cast<Eigen::Index>(labels_.size()) != C_.rows())
        throw InvalidArgument("plant output labels do not match C");
}

Plant Plant::from_fom(const FullOrderModel& fom) {
    Plant p(fom.A, fom.Bc, fom.Bg, fom.C, fom.output_labels);
    p.set_nonlinearity(fom.nonlinear);
    return p;
}

Plant Plant::from_rom(const ReducedOrderModel& rom) {
    Plant p(rom.A, rom.Bc, rom.Bg, rom.C, rom.output_labels);
    if (rom.has_nonlinearity()) p.set_nonlinearity(rom.full_nonlinear, rom.Phi, rom.Psi);
    return p;
}

void Plant::set_nonlinearity(PolynomialField field, Matrix Phi, Matrix Psi) {
    if (Phi.size() == 0) {
        if (field.dim() != states() && !field.empty())
            throw InvalidArgument("nonlinearity dimension does not match the plant");
    } else if (Phi.cols() != states() || Psi.rows() != states() || Phi.rows() != field.dim() ||
               Psi.cols() != field.dim()) {
        throw InvalidArgument("projected nonlinearity dimensions do not match the plant");
    }
    field_ = std::move(field);
    Phi_ = std::move(Phi);
    Psi_ = std::move(Psi);
}

void Plant::add_f(const Vector& x, Vector& out) const {
    if (field_.empty()) return;
    if (Phi_.size() == 0) {
        field_.accumulate(x, out);
    } else {
        out.noalias() += Psi_ * field_(Phi_ * x);
    }
}

Vector Plant::f(const Vector& x) const {
    Vector out = Vector::Zero(states());
    add_f(x, out);
    return out;
}

void SimulationConfig::validate() const {
    if (!(dt > 0.0)) throw InvalidArgument("simulation dt must be positive");
    if (!(duration >= dt)) throw InvalidArgument("simulation duration must be at least dt");
    if (stride < 1) throw InvalidArgument("logging stride must be at least 1");
    if (!(divergence_bound > 0.0)) throw InvalidArgument("divergence bound must be positive");
}

Controller Controller::make(const Plant& plant, const ReferenceModel& ref, const Matrix& Q, double gamma,
                            GammaMode mode) {
    Controller c;
    c.reference = ref;
    c.design = make_lyapunov_design(ref.Am, Q, gamma, plant.inputs(), mode);
    c.initial = ControllerState::zeros(plant.states(), plant.inputs());
    const auto g = ideal_gains(plant.A(), plant.Bc(), ref.Am, ref.Bm);
    if (g.exact) c.theta_star = g.theta();
    return c;
}

std::vector<Vector> SimulationTrace::errors() const {
    std::vector<Vector> e;
    e.reserve(x.size());
    for (std::size_t k = 0; k < x.size() && k < xm.size(); ++k) e.push_back(x[k] - xm[k]);
    return e;
}

SimulationDiverged::SimulationDiverged(const std::string& what, SimulationTrace partial)
    : DivergenceError(what), partial_(std::make_shared<const SimulationTrace>(std::move(partial))) {}

namespace {

struct Aug {
    Vector x, xm;
    Matrix th;
};

bool bounded(const Aug& s, double bound) {
    const double nx = s.x.norm(), nm = s.xm.size() ? s.xm.norm() : 0.0, nt = s.th.size() ? s.th.norm() : 0.0;
    return std::isfinite(nx) && std::isfinite(nm) && std::isfinite(nt) && nx <= bound && nm <= bound && nt <= bound;
}

}  // namespace

SimulationTrace integrate_open_loop(const Plant& plant, const GustSignal& gust, const SimulationConfig& cfg) {
    cfg.validate();
    SimulationTrace tr;
    tr.output_labels = plant.output_labels();
    check_dt(cfg, plant.A(), tr.warnings);
    const int n = plant.states(), m = plant.inputs();
    const bool nl = cfg.nonlinear && plant.has_nonlinearity();
    const Vector u0 = Vector::Zero(m);
    const Matrix Bg = plant.Bg();

    auto rhs = [&](double t, const Vector& x) {
        Vector d = plant.A() * x;
        d.noalias() += Bg.col(0) * gust(t);
        if (nl) plant.add_f(x, d);
        return d;
    };
    if (Bg.cols() != 1) throw InvalidArgument("simulation supports a single gust channel");

    auto log = [&](double t, const Vector& x) {
        tr.t.push_back(t);
        tr.x.push_back(x);
        tr.u.push_back(u0);
        tr.ud.push_back(gust(t));
        tr.y.push_back(plant.C() * x);
    };

    Vector x = Vector::Zero(n);
    const std::size_t steps = step_count(cfg);
    const double h = cfg.dt;
    log(0.0, x);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const Vector k1 = rhs(t, x);
        const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
        const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
        const Vector k4 = rhs(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double tn = static_cast<double>(k + 1) * h;
        if (!std::isfinite(x.norm()) || x.norm() > cfg.divergence_bound) {
            tr.complete = false;
            std::ostringstream os;
            os << "open-loop simulation diverged at t = " << tn;
            throw SimulationDiverged(os.str(), std::move(tr));
        }
        if ((k + 1) % static_cast<std::size_t>(cfg.stride) == 0 || k + 1 == steps) log(tn, x);
    }
    return tr;
}

SimulationTrace integrate_closed_loop(const Plant& plant, const Controller& ctrl, const GustSignal& gust,
                                      const SimulationConfig& cfg) {
    cfg.validate();
    const int n = plant.states(), m = plant.inputs();
    const auto& ref = ctrl.reference;
    const auto& des = ctrl.design;
    if (ref.Am.rows() != n || des.P.rows() != n || ctrl.initial.theta.rows() != n + m || ctrl.initial.theta.cols() != m)
        throw InvalidArgument("controller dimensions do not match the plant");
    if (plant.Bg().cols() != 1) throw InvalidArgument("simulation supports a single gust channel");

    SimulationTrace tr;
    tr.closed_loop = true;
    tr.output_labels = plant.output_labels();
    check_dt(cfg, plant.A(), tr.warnings);
    check_dt(cfg, ref.Am, tr.warnings);

    const bool nl = cfg.nonlinear && plant.has_nonlinearity();
    const bool ref_nl = nl && ref.include_nonlinear;
    const Vector r = ctrl.r.size() ? ctrl.r : Vector::Zero(m);
    const Matrix K0 = ctrl.initial.K0.size() ? ctrl.initial.K0 : Matrix::Zero(m, n);
    const Vector bg = plant.Bg().col(0);
    const Matrix PBc = des.P * plant.Bc();
    const Vector Bm_r = ref.Bm * r;

    auto control = [&](const Aug& s) {
        Vector u = s.th.topRows(n).transpose() * s.x;
        u.noalias() += s.th.bottomRows(m).transpose() * r;
        u.noalias() += K0 * s.x;
        return u;
    };
    auto rhs = [&](double t, const Aug& s) {
        const double w = gust(t);
        Aug d;
        const Vector u = control(s);
        d.x = plant.A() * s.x;
        d.x.noalias() += plant.Bc() * u;
        d.x.noalias() += bg * w;
        if (nl) plant.add_f(s.x, d.x);
        d.xm = ref.Am * s.xm;
        d.xm += Bm_r;
        d.xm.noalias() += bg * w;
        if (ref_nl) plant.add_f(s.xm, d.xm);
        Vector phi(n + m);
        phi << s.x, r;
        const RowVector ePB = (s.x - s.xm).transpose() * PBc;
        d.th = -(des.Gamma * phi) * ePB;
        return d;
    };
    auto axpy = [](const Aug& a, double c, const Aug& d) {
        return Aug{a.x + c * d.x, a.xm + c * d.xm, a.th + c * d.th};
    };

    if (cfg.monitor) {
        tr.monitor.emplace();
        tr.monitor->L_F = lipschitz_bound(des);
    }
    // without theta* the logged V is the error-only part e^T P e
    const bool with_V = cfg.certificate;
    const Matrix* ts = (ctrl.theta_star && des.gamma > 0.0) ? &*ctrl.theta_star : nullptr;

    auto log = [&](double t, const Aug& s) {
        tr.t.push_back(t);
        tr.x.push_back(s.x);
        tr.xm.push_back(s.xm);
        tr.theta.push_back(s.th);
        tr.u.push_back(control(s));
        tr.ud.push_back(gust(t));
        tr.y.push_back(plant.C() * s.x);
        if (with_V) tr.V.push_back(lyapunov_value(des, s.x - s.xm, s.th, ts));
        if (tr.monitor) {
            const Vector fx = nl ? plant.f(s.x) : Vector::Zero(n);
            const Vector fm = nl ? plant.f(s.xm) : Vector::Zero(n);
            tr.monitor_ratio.push_back(tr.monitor->observe(t, s.x, s.xm, fx, fm));
        }
    };

    Aug s{Vector::Zero(n), Vector::Zero(n), ctrl.initial.theta};
    const std::size_t steps = step_count(cfg);
    const double h = cfg.dt;
    log(0.0, s);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const Aug k1 = rhs(t, s);
        const Aug k2 = rhs(t + 0.5 * h, axpy(s, 0.5 * h, k1));
        const Aug k3 = rhs(t + 0.5 * h, axpy(s, 0.5 * h, k2));
        const Aug k4 = rhs(t + h, axpy(s, h, k3));
        s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        s.xm += h / 6.0 * (k1.xm + 2.0 * k2.xm + 2.0 * k3.xm + k4.xm);
        s.th += h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th);
        const double tn = static_cast<double>(k + 1) * h;
        if (!bounded(s, cfg.divergence_bound)) {
            tr.complete = false;
            std::ostringstream os;
            os << "closed-loop simulation diverged at t = " << tn;
            throw SimulationDiverged(os.str(), std::move(tr));
        }
        if ((k + 1) % static_cast<std::size_t>(cfg.stride) == 0 || k + 1 == steps) log(tn, s);
    }
    return tr;
}

CertificateResult lyapunov_certificate(const SimulationTrace& trace, const LyapunovDesign& design,
                                       const std::optional<Matrix>& theta_star, CertificateMode mode) {
    if (!trace.closed_loop) throw InvalidArgument("Lyapunov certificate needs a closed-loop trace");
    return lyapunov_certificate(trace.errors(), trace.theta, design, theta_star, mode);
}

double peak_abs(const SimulationTrace& trace, int output) {
    double p = 0.0;
    for (const auto& y : trace.y) {
        if (output < 0 || output >= y.size()) throw InvalidArgument("output index out of range");
        p = std::max(p, std::abs(y(output)));
    }
    return p;
}

namespace {

double rms(const SimulationTrace& tr, int output) {
    if (tr.y.empty()) return 0.0;
    double s = 0.0;
    for (const auto& y : tr.y) s += y(output) * y(output);
    return std::sqrt(s / static_cast<double>(tr.y.size()));
}

}  // namespace

GlaMetrics compute_metrics(const SimulationTrace& open, const SimulationTrace& closed, int output,
                           bool flap_in_degrees) {
    if (open.t.size() != closed.t.size()) throw InvalidArgument("metrics: traces have different time grids");
    for (std::size_t k = 0; k < open.t.size(); ++k)
        if (std::abs(open.t[k] - closed.t[k]) > 1e-9 * std::max(1.0, std::abs(open.t[k])))
            throw InvalidArgument("metrics: traces have different time grids");
    GlaMetrics g;
    g.output = output;
    if (output >= 0 && output < static_cast<int>(open.output_labels.size()))
        g.output_label = open.output_labels[output];
    g.peak_open = peak_abs(open, output);
    g.peak_closed = peak_abs(closed, output);
    g.reduction_percent = g.peak_open > 0.0 ? 100.0 * (1.0 - g.peak_closed / g.peak_open) : 0.0;
    for (const auto& u : closed.u) g.max_flap = std::max(g.max_flap, u.size() ? u.cwiseAbs().maxCoeff() : 0.0);
    g.flap_in_degrees = flap_in_degrees;
    if (flap_in_degrees) g.max_flap *= rad2deg;
    g.rms_open = rms(open, output);
    g.rms_closed = rms(closed, output);
    const std::size_t tail = closed.y.size() - closed.y.size() / 10;
    double late = 0.0;
    for (std::size_t k = tail; k < closed.y.size(); ++k) late = std::max(late, std::abs(closed.y[k](output)));
    g.settled = late <= 0.05 * g.peak_closed;
    return g;
}

RomValidation validate_rom(const FullOrderModel& fom, const ReducedOrderModel& rom, const GustSignal& gust,
                           const SimulationConfig& cfg) {
    RomValidation v;
    v.full = integrate_open_loop(Plant::from_fom(fom), gust, cfg);
    v.reduced = integrate_open_loop(Plant::from_rom(rom), gust, cfg);
    const int p = static_cast<int>(fom.C.rows());
    v.labels = fom.output_labels;
    for (int i = 0; i < p; ++i) {
        const double pf = peak_abs(v.full, i), pr = peak_abs(v.reduced, i);
        double se = 0.0;
        for (std::size_t k = 0; k < v.full.y.size(); ++k) {
            const double d = v.reduced.y[k](i) - v.full.y[k](i);
            se += d * d;
        }
        const double r = std::sqrt(se / static_cast<double>(v.full.y.size()));
        v.peak_full.push_back(pf);
        v.peak_rom.push_back(pr);
        v.peak_error_percent.push_back(pf > 0.0 ? 100.0 * std::abs(pr - pf) / pf : 0.0);
        v.nrms_percent.push_back(pf > 0.0 ? 100.0 * r / pf : 0.0);
    }
    return v;
}

GradientSweepResult sweep_gust_gradient(const Plant& plant, const Controller* ctrl, const std::vector<double>& Hg,
                                        double W0, double U_inf, const SimulationConfig& cfg, int output) {
    auto peak = [&](double h) {
        const auto g = GustSignal::one_cosine(W0, h, U_inf);
        const auto tr = ctrl ? integrate_closed_loop(plant, *ctrl, g, cfg) : integrate_open_loop(plant, g, cfg);
        return peak_abs(tr, output);
    };
    return worst_case_gradient_sweep(peak, Hg);
}

void write_trace_csv(std::ostream& os, const SimulationTrace& tr, bool deg) {
    os << std::setprecision(17);
    os << 't';
    for (const auto& l : tr.output_labels) os << ',' << l;
    const std::size_t m = tr.u.empty() ? 0 : static_cast<std::size_t>(tr.u.front().size());
    for (std::size_t j = 0; j < m; ++j) os << ",u_c" << (m > 1 ? std::to_string(j) : "");
    os << ",u_d,V,monitor_ratio\n";
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
        os << tr.t[k];
        for (std::size_t i = 0; i < tr.output_labels.size(); ++i) {
            double v = tr.y[k](static_cast<Eigen::Index>(i));
            if (deg && is_angle_label(tr.output_labels[i])) v *= rad2deg;
            os << ',' << v;
        }
        for (std::size_t j = 0; j < m; ++j) os << ',' << tr.u[k](static_cast<Eigen::Index>(j)) * (deg ? rad2deg : 1.0);
        os << ',' << tr.ud[k] << ',';
        if (k < tr.V.size()) os << tr.V[k];
        os << ',';
        if (k < tr.monitor_ratio.size() && !std::isnan(tr.monitor_ratio[k])) os << tr.monitor_ratio[k];
        os << '\n';
    }
}

void write_metrics_csv(std::ostream& os, const std::vector<GlaMetrics>& rows, const std::vector<std::string>& labels) {
    os << std::setprecision(17);
    os << "run,output,peak_open,peak_closed,reduction_percent,max_flap,flap_unit,rms_open,rms_closed,settled\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& g = rows[i];
        os << (i < labels.size() ? labels[i] : std::to_string(i)) << ',' << g.output_label << ',' << g.peak_open << ','
           << g.peak_closed << ',' << g.reduction_percent << ',' << g.max_flap << ','
           << (g.flap_in_degrees ? "deg" : "rad") << ',' << g.rms_open << ',' << g.rms_closed << ','
           << (g.settled ? 1 : 0) << '\n';
    }
}

std::string metrics_summary(const GlaMetrics& g) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    os << "output " << (g.output_label.empty() ? std::to_string(g.output) : g.output_label) << ": peak open "
       << g.peak_open << ", peak closed " << g.peak_closed << ", reduction " << std::setprecision(2)
       << g.reduction_percent << "%, max flap " << std::setprecision(4) << g.max_flap
       << (g.flap_in_degrees ? " deg" : " rad") << (g.settled ? ", settled" : ", not settled");
    return os.str();
}

}  // namespace gla

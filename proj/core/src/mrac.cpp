#include <gla/error.hpp>
#include <gla/mrac.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gla {

std::vector<int> modal_blocks(const Matrix& A) {
    std::vector<int> starts;
    const int n = static_cast<int>(A.rows());
    for (int i = 0; i < n;) {
        starts.push_back(i);
        i += (i + 1 < n && A(i + 1, i) != 0.0) ? 2 : 1;
    }
    return starts;
}

ReferenceModel build_reference_model(const Matrix& A, const Matrix& Bc, const DampingSpec& spec) {
    if (A.rows() != A.cols() || Bc.rows() != A.rows())
        throw InvalidArgument("reference model: inconsistent A / B_c dimensions");
    if (!spec.allow_destabilizing && (spec.oscillatory_factor < 1.0 || spec.real_factor < 1.0))
        throw InvalidArgument("reference model: damping factors below 1 reduce damping");
    const auto blocks = modal_blocks(A);
    const int n = static_cast<int>(A.rows());
    const double off_tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());

    ReferenceModel ref;
    ref.Am = Matrix::Zero(n, n);
    ref.Bm = Bc;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int i = blocks[b];
        const int size = (b + 1 < blocks.size() ? blocks[b + 1] : n) - i;
        // off-block entries must vanish for a modal form
        for (int r = 0; r < n; ++r)
            for (int c = i; c < i + size; ++c)
                if ((r < i || r >= i + size) && std::abs(A(r, c)) > off_tol)
                    throw InvalidArgument("reference model: A is not in block-modal form");
        double sigma, omega = 0.0;
        if (size == 1) {
            sigma = -A(i, i) * spec.real_factor;
        } else {
            sigma = -A(i, i) * spec.oscillatory_factor;
            omega = A(i, i + 1);
        }
        for (const auto& o : spec.overrides) {
            if (o.block != static_cast<int>(b)) continue;
            if (!spec.allow_destabilizing && o.sigma < -A(i, i))
                throw InvalidArgument("reference model: override reduces the decay rate of block " + std::to_string(b));
            sigma = o.sigma;
            if (size == 2) omega = o.omega;
        }
        if (!(sigma > 0.0)) {
            std::ostringstream os;
            os << "reference model is not Hurwitz: block " << b << " decay rate " << sigma;
            throw NumericalError(os.str());
        }
        ref.Am(i, i) = -sigma;
        if (size == 2) {
            ref.Am(i, i + 1) = omega;
            ref.Am(i + 1, i) = -omega;
            ref.Am(i + 1, i + 1) = -sigma;
        }
        const double mag = std::hypot(sigma, omega);
        ref.targets.push_back({sigma, omega, sigma / mag, size == 2});
    }
    return ref;
}

ReferenceModel build_reference_model(const ReducedOrderModel& rom, const DampingSpec& spec) {
    return build_reference_model(rom.A, rom.Bc, spec);
}

Matrix IdealGains::theta() const {
    Matrix t(Kx.rows() + Kr.rows(), Kx.cols());
    t << Kx, Kr;
    return t;
}

IdealGains ideal_gains(const Matrix& A, const Matrix& Bc, const Matrix& Am, const Matrix& Bm) {
    const auto n = A.rows();
    if (A.cols() != n || Bc.rows() != n || Am.rows() != n || Am.cols() != n || Bm.rows() != n || Bm.cols() != Bc.cols())
        throw InvalidArgument("ideal_gains: inconsistent dimensions");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Bc);
    cod.setThreshold(1e-12);
    if (cod.rank() == 0) throw NumericalError("ideal_gains: B_c has rank 0");
    IdealGains g;
    g.Kx = cod.solve(Am - A).transpose();
    g.Kr = cod.solve(Bm).transpose();
    g.residual_x = (A + Bc * g.Kx.transpose() - Am).norm();
    g.residual_r = (Bc * g.Kr.transpose() - Bm).norm();
    const double scale = std::max(1.0, (Am - A).norm() + Bm.norm());
    g.exact = g.residual_x <= 1e-8 * scale && g.residual_r <= 1e-8 * scale;

    const Matrix Co = controllability_matrix(A, Bc);
    Eigen::JacobiSVD<Matrix> svd(Co);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-10 * s(0)) ++g.controllability_rank;
    return g;
}

LyapunovDesign make_lyapunov_design(const Matrix& Am, const Matrix& Q, double gamma, int m, GammaMode mode) {
    if (gamma < 0.0) throw InvalidArgument("adaptation rate gamma must be non-negative");
    if (m <= 0) throw InvalidArgument("design needs at least one control input");
    Eigen::LLT<Matrix> llt(0.5 * (Q + Q.transpose()));
    if (llt.info() != Eigen::Success) throw NumericalError("Lyapunov weighting Q is not positive definite");
    LyapunovDesign d;
    d.Q = Q;
    d.P = solve_lyapunov(Am, Q);
    d.gamma = gamma;
    d.mode = mode;
    const auto n = Q.rows();
    Matrix base = Matrix::Identity(n + m, n + m);
    if (mode == GammaMode::ScaledQ) base.topLeftCorner(n, n) = Q;
    d.Gamma = gamma * base;
    d.Gamma_inv = gamma > 0.0 ? Matrix(base.inverse() / gamma) : Matrix::Zero(n + m, n + m);
    return d;
}

ControllerState ControllerState::zeros(int n, int m) { return {Matrix::Zero(n + m, m), Matrix::Zero(m, n)}; }

Matrix adaptation_rate(const LyapunovDesign& design, const Matrix& Bc, const Vector& e, const Vector& phi) {
    const RowVector ePB = e.transpose() * design.P * Bc;
    return -(design.Gamma * phi) * ePB;
}

Matrix adapt_step(const ControllerState& state, const Vector& e, const Vector& phi, const LyapunovDesign& design,
                  const Matrix& Bc, double dt) {
    if (!(dt > 0.0)) throw InvalidArgument("adapt_step: dt must be positive");
    if (phi.size() != state.theta.rows() || e.size() != Bc.rows())
        throw InvalidArgument("adapt_step: inconsistent dimensions");
    return state.theta + dt * adaptation_rate(design, Bc, e, phi);
}

Vector control_input(const ControllerState& state, const Vector& x, const Vector& r) {
    const auto n = x.size();
    Vector u = state.theta.topRows(n).transpose() * x;
    if (r.size() > 0) u += state.theta.bottomRows(r.size()).transpose() * r;
    if (state.K0.size() > 0) u += state.K0 * x;
    return u;
}

MinimumPhaseResult minimum_phase_correct(const Matrix& A, const Matrix& Bc, const RowVector& C) {
    const auto n = A.rows();
    if (Bc.cols() != 1 || Bc.rows() != n || C.size() != n)
        throw InvalidArgument("minimum-phase correction needs a SISO channel");
    MinimumPhaseResult res;
    res.K0 = RowVector::Zero(n);
    res.C_corrected = C;
    res.A_modified = A;
    res.zeros_before = transmission_zeros(A, Bc, C, Matrix::Zero(1, 1));
    const bool rhp =
        std::any_of(res.zeros_before.begin(), res.zeros_before.end(), [](Complex z) { return z.real() >= 0.0; });
    if (!rhp) {
        res.zeros_after = res.zeros_before;
        return res;
    }
    Matrix T;
    try {
        T = controllable_canonical_transform(A, Bc.col(0));
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("zero relocation infeasible: ") + e.what());
    }
    // numerator coefficients, ascending powers
    const RowVector num = C * T;
    Eigen::Index deg = n - 1;
    const double tol = 1e-12 * num.cwiseAbs().maxCoeff();
    while (deg > 0 && std::abs(num(deg)) <= tol) --deg;
    Vector desc(deg + 1);
    for (Eigen::Index k = 0; k <= deg; ++k) desc(k) = num(deg - k);
    auto roots = polynomial_roots(desc);
    for (auto& z : roots)
        if (z.real() >= 0.0) z = Complex(-std::max(std::abs(z.real()), 1e-6), z.imag());
    const Vector mirrored = desc(0) * polynomial_from_roots(roots);
    RowVector num_new = RowVector::Zero(n);
    for (Eigen::Index k = 0; k <= deg; ++k) num_new(k) = mirrored(deg - k);
    res.C_corrected = T.transpose().fullPivLu().solve(num_new.transpose()).transpose();
    res.zeros_after = transmission_zeros(A, Bc, res.C_corrected, Matrix::Zero(1, 1));
    res.corrected = true;
    return res;
}

MinimumPhaseResult minimum_phase_correct(const ReducedOrderModel& rom, int output_row) {
    if (output_row < 0 || output_row >= rom.C.rows()) throw InvalidArgument("output row out of range");
    if (rom.Bc.cols() != 1) throw InvalidArgument("minimum-phase correction needs a single control input");
    return minimum_phase_correct(rom.A, rom.Bc, rom.C.row(output_row));
}

double lipschitz_bound(const LyapunovDesign& design) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (design.Q + design.Q.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() / (2.0 * spectral_norm(design.P));
}

double LipschitzMonitor::observe(double t, const Vector& x, const Vector& xm, const Vector& fx, const Vector& fxm) {
    const double d = (x - xm).norm();
    if (d < 1e-12) {
        ++skipped;
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double ratio = (fx - fxm).norm() / d;
    ++samples;
    max_ratio = std::max(max_ratio, ratio);
    if (ratio > L_F && !violated) {
        violated = true;
        first_violation_time = t;
    }
    return ratio;
}

LipschitzMonitor lipschitz_margin(const LyapunovDesign& design, const NonlinearMap& f_nr, const std::vector<double>& t,
                                  const std::vector<Vector>& x, const std::vector<Vector>& xm) {
    if (t.size() != x.size() || x.size() != xm.size())
        throw InvalidArgument("lipschitz_margin: trajectory arrays differ in length");
    LipschitzMonitor mon;
    mon.L_F = lipschitz_bound(design);
    for (std::size_t k = 0; k < t.size(); ++k) mon.observe(t[k], x[k], xm[k], f_nr(x[k]), f_nr(xm[k]));
    return mon;
}

LipschitzMonitor lipschitz_margin(const LyapunovDesign& design, const ReducedOrderModel& rom,
                                  const std::vector<double>& t, const std::vector<Vector>& x,
                                  const std::vector<Vector>& xm) {
    return lipschitz_margin(design, [&rom](const Vector& v) { return rom.eval_f_nr(v); }, t, x, xm);
}

double lyapunov_value(const LyapunovDesign& design, const Vector& e, const Matrix& theta, const Matrix* theta_star) {
    double V = e.dot(design.P * e);
    if (theta_star) {
        const Matrix tt = theta - *theta_star;
        V += (tt.transpose() * design.Gamma_inv * tt).trace();
    }
    return V;
}

CertificateResult lyapunov_certificate(const std::vector<Vector>& e, const std::vector<Matrix>& theta,
                                       const LyapunovDesign& design, const std::optional<Matrix>& theta_star,
                                       CertificateMode mode) {
    if (mode == CertificateMode::Full && !theta_star)
        throw InvalidArgument("full Lyapunov certificate needs theta*; use the error-only mode");
    if (mode == CertificateMode::Full && design.gamma <= 0.0)
        throw InvalidArgument("full Lyapunov certificate needs gamma > 0");
    if (e.size() != theta.size()) throw InvalidArgument("lyapunov_certificate: e and theta lengths differ");
    CertificateResult res;
    res.mode = mode;
    const Matrix* ts = mode == CertificateMode::Full ? &*theta_star : nullptr;
    res.V.reserve(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) res.V.push_back(lyapunov_value(design, e[k], theta[k], ts));
    const double slack = res.V.empty() ? 0.0 : 1e-8 * res.V.front();
    res.pass = true;
    for (std::size_t k = 1; k < res.V.size(); ++k) {
        const double inc = res.V[k] - res.V[k - 1];
        res.max_increase = std::max(res.max_increase, inc);
        if (inc > slack && res.pass) {
            res.pass = false;
            res.first_violation = static_cast<int>(k);
        }
    }
    return res;
}

}  // namespace gla

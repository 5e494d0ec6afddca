#include <gla/error.hpp>
#include <gla/rom.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gla {

std::vector<ModeInfo> describe_modes(const SpectralDecomposition& decomp, const Matrix& Bgf, const Matrix& Bcf) {
    const auto N = decomp.eigenvalues.size();
    std::vector<ModeInfo> out(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) {
        const Complex lam = decomp.eigenvalues(i);
        ModeInfo& m = out[static_cast<std::size_t>(i)];
        m.eigenvalue = lam.imag() < 0.0 ? std::conj(lam) : lam;
        m.frequency = std::abs(lam.imag());
        m.kind = lam.imag() == 0.0 ? ModeKind::Real : ModeKind::Oscillatory;
        const double mag = std::abs(lam);
        m.damping_ratio = mag > 0.0 ? -lam.real() / mag : 1.0;
        m.source_index = static_cast<int>(i);
        if (Bgf.size() > 0) m.gust_participation = (decomp.left.row(i) * Bgf.cast<Complex>()).norm();
        if (Bcf.size() > 0) m.control_participation = (decomp.left.row(i) * Bcf.cast<Complex>()).norm();
    }
    return out;
}

std::vector<int> select_modes(const SpectralDecomposition& decomp, const Matrix& Bgf, const ModeCriteria& criteria,
                              const Matrix& Bcf) {
    const int N = static_cast<int>(decomp.eigenvalues.size());
    if (criteria.n > N)
        throw InvalidArgument("requested ROM order " + std::to_string(criteria.n) + " exceeds model order " +
                              std::to_string(N));
    if (criteria.n <= 0) throw InvalidArgument("ROM order must be positive");
    if (Bgf.rows() != N) throw InvalidArgument("B_g row count does not match the decomposition");

    const auto info = describe_modes(decomp, Bgf, Bcf);

    // Selection units: a conjugate pair, or a cluster of coincident real eigenvalues.
    struct Unit {
        std::vector<int> members;
        double gust = 0.0, control = 0.0;
    };
    std::vector<Unit> pairs, reals;
    for (int i = 0; i < N; ++i) {
        const Complex lam = decomp.eigenvalues(i);
        if (lam.imag() > 0.0) {
            pairs.push_back({{i, i + 1}, info[i].gust_participation, info[i].control_participation});
            ++i;
            continue;
        }
        if (lam.imag() < 0.0) throw InvalidArgument("decomposition ordering breaks a conjugate pair");
        bool merged = false;
        for (auto& u : reals) {
            const double ref = decomp.eigenvalues(u.members.front()).real();
            if (std::abs(ref - lam.real()) <= criteria.cluster_tol * std::max(1.0, std::abs(ref))) {
                u.members.push_back(i);
                u.gust = std::max(u.gust, info[i].gust_participation);
                u.control = std::max(u.control, info[i].control_participation);
                merged = true;
                break;
            }
        }
        if (!merged) reals.push_back({{i}, info[i].gust_participation, info[i].control_participation});
    }
    std::stable_sort(reals.begin(), reals.end(), [](const Unit& a, const Unit& b) {
        if (a.gust != b.gust) return a.gust > b.gust;
        return a.control > b.control;
    });

    std::vector<const Unit*> order;
    std::size_t r = 0;
    int real_count = 0;
    while (r < reals.size() && real_count < criteria.real_modes) {
        order.push_back(&reals[r]);
        real_count += static_cast<int>(reals[r].members.size());
        ++r;
    }
    for (const auto& p : pairs) order.push_back(&p);
    for (; r < reals.size(); ++r) order.push_back(&reals[r]);

    std::vector<int> chosen;
    int remaining = criteria.n;
    for (const Unit* u : order) {
        if (remaining == 0) break;
        const int size = static_cast<int>(u->members.size());
        if (size <= remaining) {
            chosen.insert(chosen.end(), u->members.begin(), u->members.end());
            remaining -= size;
        }
    }
    if (remaining != 0)
        throw InvalidArgument("ROM order " + std::to_string(criteria.n) +
                              " cannot be met without splitting a conjugate pair or eigenvalue cluster");
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

RealModalForm realify(const CVector& eigenvalues, const CMatrix& Phi, const CMatrix& Psi) {
    const auto n = eigenvalues.size();
    if (Phi.cols() != n || Psi.rows() != n || Phi.rows() != Psi.cols())
        throw InvalidArgument("realify: basis dimensions do not match the eigenvalue count");
    const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    RealModalForm out;
    out.Lambda = Matrix::Zero(n, n);
    out.Phi.resize(Phi.rows(), n);
    out.Psi.resize(n, Psi.cols());
    out.eigenvalues = eigenvalues;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lam = eigenvalues(i);
        if (std::abs(lam.imag()) <= 1e-14 * scale) {
            out.Lambda(i, i) = lam.real();
            out.Phi.col(i) = Phi.col(i).real();
            out.Psi.row(i) = Psi.row(i).real();
            continue;
        }
        if (lam.imag() < 0.0 || i + 1 >= n || std::abs(eigenvalues(i + 1) - std::conj(lam)) > 1e-10 * scale) {
            std::ostringstream os;
            os << "realify: eigenvalue " << lam << " is not followed by its conjugate";
            throw InvalidArgument(os.str());
        }
        const double s = lam.real(), w = lam.imag();
        out.Lambda(i, i) = s;
        out.Lambda(i, i + 1) = w;
        out.Lambda(i + 1, i) = -w;
        out.Lambda(i + 1, i + 1) = s;
        out.Phi.col(i) = Phi.col(i).real();
        out.Phi.col(i + 1) = Phi.col(i).imag();
        out.Psi.row(i) = 2.0 * Psi.row(i).real();
        out.Psi.row(i + 1) = -2.0 * Psi.row(i).imag();
        ++i;
    }
    return out;
}

ReducedOrderModel build_nrom(const FullOrderModel& fom, const SpectralDecomposition& decomp,
                             const std::vector<int>& modes) {
    const int N = fom.states();
    if (decomp.eigenvalues.size() != N) throw InvalidArgument("decomposition does not belong to this model");
    const auto n = static_cast<Eigen::Index>(modes.size());
    if (n == 0) throw InvalidArgument("empty mode selection");
    std::vector<int> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    CVector lam(n);
    CMatrix Phi(N, n), Psi(n, N);
    for (Eigen::Index k = 0; k < n; ++k) {
        const int i = sorted[static_cast<std::size_t>(k)];
        if (i < 0 || i >= N) throw InvalidArgument("mode index out of range");
        lam(k) = decomp.eigenvalues(i);
        Phi.col(k) = decomp.right.col(i);
        Psi.row(k) = decomp.left.row(i);
    }
    const auto real = realify(lam, Phi, Psi);
    const auto info = describe_modes(decomp, fom.Bg, fom.Bc);

    ReducedOrderModel rom;
    rom.Phi = real.Phi;
    rom.Psi = real.Psi;
    rom.A = real.Lambda;
    rom.Bc = rom.Psi * fom.Bc;
    rom.Bg = rom.Psi * fom.Bg;
    rom.C = fom.C * rom.Phi;
    rom.eigenvalues = lam;
    for (int i : sorted) rom.modes.push_back(info[static_cast<std::size_t>(i)]);
    rom.full_nonlinear = fom.nonlinear;
    rom.output_labels = fom.output_labels;
    return rom;
}

ReducedOrderModel build_nrom(const FullOrderModel& fom, const ModeCriteria& criteria) {
    const auto decomp = eig_biorthogonal(fom.A);
    return build_nrom(fom, decomp, select_modes(decomp, fom.Bg, criteria, fom.Bc));
}

Vector ReducedOrderModel::eval_f_nr(const Vector& x) const {
    if (full_nonlinear.empty()) return Vector::Zero(A.rows());
    return Psi * full_nonlinear(Phi * x);
}

Vector eval_f_nr(const ReducedOrderModel& rom, const Vector& x) { return rom.eval_f_nr(x); }

}  // namespace gla

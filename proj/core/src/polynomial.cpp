#include <gla/polynomial.hpp>
#include <gla/error.hpp>

#include <algorithm>
#include <string>

namespace gla {

namespace {

void check_index(int dim, int v, const char* what) {
    if (v < 0 || v >= dim)
        throw InvalidArgument(std::string("polynomial term ") + what + " index " + std::to_string(v) + " outside [0, " +
                              std::to_string(dim) + ")");
}

}  // namespace

void PolynomialField::add_quadratic(int row, double coeff, int i, int j) {
    check_index(dim_, row, "row");
    check_index(dim_, i, "factor");
    check_index(dim_, j, "factor");
    if (coeff != 0.0) terms_.push_back({row, coeff, {i, j, -1}});
}

void PolynomialField::add_cubic(int row, double coeff, int i, int j, int k) {
    check_index(dim_, row, "row");
    check_index(dim_, i, "factor");
    check_index(dim_, j, "factor");
    check_index(dim_, k, "factor");
    if (coeff != 0.0) terms_.push_back({row, coeff, {i, j, k}});
}

void PolynomialField::accumulate(const Vector& w, Vector& out) const {
    for (const auto& t : terms_) {
        double v = t.coeff * w[t.idx[0]] * w[t.idx[1]];
        if (!t.quadratic()) v *= w[t.idx[2]];
        out[t.row] += v;
    }
}

Vector PolynomialField::operator()(const Vector& w) const {
    if (w.size() != dim_)
        throw InvalidArgument("polynomial field expects dimension " + std::to_string(dim_) + ", got " +
                              std::to_string(w.size()));
    Vector out = Vector::Zero(dim_);
    accumulate(w, out);
    return out;
}

std::vector<double> PolynomialField::cubic_tensor() const {
    const std::size_t n = static_cast<std::size_t>(dim_);
    std::vector<double> T(n * n * n * n, 0.0);
    for (const auto& t : terms_) {
        if (t.quadratic()) continue;
        std::array<int, 3> p = t.idx;
        std::sort(p.begin(), p.end());
        // spread the coefficient evenly over all index permutations
        std::vector<std::array<int, 3>> perms;
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        const double share = t.coeff / static_cast<double>(perms.size());
        for (const auto& q : perms) T[((t.row * n + q[0]) * n + q[1]) * n + q[2]] += share;
    }
    return T;
}

}  // namespace gla

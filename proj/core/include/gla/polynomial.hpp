#pragma once

#include <gla/numerics.hpp>

#include <array>
#include <vector>

namespace gla {

// One monomial of a polynomial vector field: out[row] += coeff * w[i] * w[j] (* w[k]).
// k < 0 marks a quadratic term.
struct PolyTerm {
    int row = 0;
    double coeff = 0.0;
    std::array<int, 3> idx{0, 0, -1};

    bool quadratic() const { return idx[2] < 0; }
};

// Sparse quadratic + cubic residual F(w) = F2(w, w) + F3(w, w, w).
class PolynomialField {
  public:
    PolynomialField() = default;
    explicit PolynomialField(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_quadratic(int row, double coeff, int i, int j);
    void add_cubic(int row, double coeff, int i, int j, int k);

    Vector operator()(const Vector& w) const;
    void accumulate(const Vector& w, Vector& out) const;

    // Dense symmetric cubic tensor T[r](i, j, k), flattened as r*N^3 + i*N^2 + j*N + k.
    std::vector<double> cubic_tensor() const;

  private:
    int dim_ = 0;
    std::vector<PolyTerm> terms_;
};

}  // namespace gla

#include <gla/error.hpp>
#include <gla/polynomial.hpp>

#include <oracles.hpp>

#include <gtest/gtest.h>

using namespace gla;

namespace {

PolynomialField sample_field() {
    PolynomialField f(4);
    f.add_cubic(0, 2.0, 0, 0, 0);
    f.add_cubic(1, -0.5, 0, 1, 2);
    f.add_cubic(3, 1.5, 3, 3, 1);
    return f;
}

// Contract the flattened symmetric tensor with w three times.
Vector dense_cubic(const std::vector<double>& T, int N, const Vector& w) {
    Vector out = Vector::Zero(N);
    for (int r = 0; r < N; ++r)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) out(r) += T[((r * N + i) * N + j) * N + k] * w(i) * w(j) * w(k);
    return out;
}

}  // namespace

TEST(PolynomialField, EvaluatesMonomials) {
    auto f = sample_field();
    f.add_quadratic(2, 3.0, 1, 3);
    Vector w(4);
    w << 0.3, -1.2, 0.7, 2.0;
    const Vector v = f(w);
    EXPECT_DOUBLE_EQ(v(0), 2.0 * 0.027);
    EXPECT_DOUBLE_EQ(v(1), -0.5 * 0.3 * -1.2 * 0.7);
    EXPECT_DOUBLE_EQ(v(2), 3.0 * -1.2 * 2.0);
    EXPECT_DOUBLE_EQ(v(3), 1.5 * 4.0 * -1.2);
}

TEST(PolynomialField, CubicTensorContractionMatchesSparseEvaluation) {
    const auto f = sample_field();
    const auto T = f.cubic_tensor();
    ASSERT_EQ(T.size(), 256u);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10; ++trial) {
        Vector w(4);
        for (int i = 0; i < 4; ++i) w(i) = nd(rng);
        EXPECT_LE((dense_cubic(T, 4, w) - f(w)).norm(), 1e-13 * (1 + f(w).norm()));
    }
}

TEST(PolynomialField, TensorIsSymmetricInItsLastThreeIndices) {
    const auto T = sample_field().cubic_tensor();
    const int N = 4;
    auto at = [&](int r, int i, int j, int k) { return T[((r * N + i) * N + j) * N + k]; };
    for (int r = 0; r < N; ++r)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    EXPECT_DOUBLE_EQ(at(r, i, j, k), at(r, j, i, k));
                    EXPECT_DOUBLE_EQ(at(r, i, j, k), at(r, k, j, i));
                }
}

TEST(PolynomialField, JacobianVanishesAtOrigin) {
    auto f = sample_field();
    f.add_quadratic(0, 1.0, 1, 2);
    const Matrix J = oracle::fd_jacobian([&](const Vector& w) { return f(w); }, Vector::Zero(4), 1e-4);
    EXPECT_LE(J.norm(), 1e-7);
}

TEST(PolynomialField, CubicFieldIsOdd) {
    const auto f = sample_field();
    Vector w(4);
    w << 0.1, 0.2, -0.3, 0.4;
    EXPECT_LE((f(-w) + f(w)).norm(), 1e-15);
}

TEST(PolynomialField, AccumulateAddsAndZeroCoefficientsAreSkipped) {
    PolynomialField f(2);
    f.add_cubic(0, 0.0, 0, 0, 0);
    EXPECT_TRUE(f.empty());
    f.add_cubic(1, 1.0, 1, 1, 1);
    Vector out = Vector::Ones(2);
    Vector w(2);
    w << 5.0, 2.0;
    f.accumulate(w, out);
    EXPECT_DOUBLE_EQ(out(0), 1.0);
    EXPECT_DOUBLE_EQ(out(1), 9.0);
}

TEST(PolynomialField, RejectsOutOfRangeIndices) {
    PolynomialField f(3);
    EXPECT_THROW(f.add_cubic(3, 1.0, 0, 0, 0), InvalidArgument);
    EXPECT_THROW(f.add_quadratic(0, 1.0, 0, 5), InvalidArgument);
    EXPECT_THROW(f.add_cubic(0, 1.0, -1, 0, 0), InvalidArgument);
}

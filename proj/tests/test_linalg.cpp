#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/linalg.hpp"

using namespace kaczmarz;

namespace {

RowMatrix random_dense(std::size_t m, std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(m * n);
  for (double& x : v) x = nd(gen);
  return RowMatrix::dense(m, n, v);
}

Vector random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (double& x : v) x = nd(gen);
  return v;
}

// Naive dense evaluation used as a second implementation.
double naive_residual(const RowMatrix& a, const Vector& x, const Vector& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    long double r = -static_cast<long double>(b[i]);
    for (std::size_t j = 0; j < a.cols(); ++j) r += static_cast<long double>(a.at(i, j)) * x[j];
    s += r * r;
  }
  return static_cast<double>(std::sqrt(s));
}

}  // namespace

TEST(RowMatrix, DenseAccessAndNorms) {
  const RowMatrix a = RowMatrix::dense(2, 3, {1, 2, 2, 0, 3, 4});
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a.cols(), 3u);
  EXPECT_FALSE(a.is_sparse());
  EXPECT_DOUBLE_EQ(a.at(1, 2), 4.0);
  EXPECT_DOUBLE_EQ(a.row_sq_norm(0), 9.0);
  EXPECT_DOUBLE_EQ(a.row_sq_norm(1), 25.0);
}

TEST(RowMatrix, SparseStructureValidated) {
  EXPECT_THROW(RowMatrix::sparse(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}), Error);  // unsorted
  EXPECT_THROW(RowMatrix::sparse(1, 3, {0, 1}, {3}, {1.0}), Error);           // out of range
  EXPECT_THROW(RowMatrix::sparse(2, 3, {0, 1, 1}, {0}, {1.0}), ZeroRow);      // empty row
  EXPECT_THROW(RowMatrix::dense(1, 2, {0.0, std::nan("")}), Error);
}

TEST(RowMatrix, ZeroRowReportsIndex) {
  try {
    RowMatrix::dense(3, 2, {1, 0, 0, 0, 0, 1});
    FAIL() << "expected ZeroRow";
  } catch (const ZeroRow& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(RowMatrix, DenseSparseConversionRoundTrip) {
  const RowMatrix a = random_dense(7, 5, 3);
  const RowMatrix s = a.to_sparse();
  EXPECT_TRUE(s.is_sparse());
  const RowMatrix d = s.to_dense();
  EXPECT_EQ(d.dense_values(), a.dense_values());
}

TEST(RowMatrix, MultiplyMatchesNaive) {
  const RowMatrix a = random_dense(6, 4, 5);
  const Vector x = random_vector(4, 6);
  const Vector r = random_vector(6, 7);
  const Vector ax = a.multiply(x);
  const Vector atr = a.multiply_transpose(r);
  for (std::size_t i = 0; i < 6; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 4; ++j) s += a.at(i, j) * x[j];
    EXPECT_NEAR(ax[i], s, 1e-13);
  }
  for (std::size_t j = 0; j < 4; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < 6; ++i) s += a.at(i, j) * r[i];
    EXPECT_NEAR(atr[j], s, 1e-13);
  }
}

TEST(NormalizeRows, ThreeFourFive) {
  const RowMatrix a = RowMatrix::dense(1, 2, {3, 4});
  const Vector b{10};
  auto [an, bn] = normalize_rows(a, b);
  EXPECT_DOUBLE_EQ(an.at(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(an.at(0, 1), 0.8);
  EXPECT_DOUBLE_EQ(bn[0], 2.0);
}

TEST(NormalizeRows, UnitRowsUnchangedBitForBit) {
  const RowMatrix a = RowMatrix::dense(2, 2, {1, 0, 0, -1});
  const Vector b{0.1, 0.7};
  auto [an, bn] = normalize_rows(a, b);
  EXPECT_EQ(an.dense_values(), a.dense_values());
  EXPECT_EQ(bn, b);
}

TEST(NormalizeRows, RandomRowsBecomeUnit) {
  const RowMatrix a = random_dense(10, 5, 11);
  auto [an, bn] = normalize_rows(a, Vector(10, 1.0));
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(an.row_sq_norm(i), 1.0, 1e-12);
    double s = 0;
    for (std::size_t j = 0; j < 5; ++j) s += an.at(i, j) * an.at(i, j);
    EXPECT_NEAR(s, an.row_sq_norm(i), 1e-12);
  }
}

TEST(NormalizeRows, SolutionSetInvariant) {
  const RowMatrix a = random_dense(12, 8, 13);
  const Vector xs = random_vector(8, 14);
  const Vector b = a.multiply(xs);
  auto [an, bn] = normalize_rows(a, b);
  EXPECT_LE(residual_norm(an, xs, bn), 1e-10);
}

TEST(NormalizeRows, LengthMismatchThrows) {
  const RowMatrix a = RowMatrix::dense(2, 2, {1, 0, 0, 1});
  EXPECT_THROW(normalize_rows(a, Vector{1.0}), ShapeMismatch);
}

TEST(ProjectHyperplane, Examples) {
  const RowMatrix e1 = RowMatrix::dense(1, 2, {1, 0});
  EXPECT_EQ(project_hyperplane(e1.row(0), 1.0, 5.0, Vector{1, 2}), (Vector{5, 2}));

  const RowMatrix a = RowMatrix::dense(1, 2, {0.6, 0.8});
  const Vector r = project_hyperplane(a.row(0), a.row_sq_norm(0), 2.0, Vector{0, 0});
  EXPECT_NEAR(r[0], 1.2, 1e-15);
  EXPECT_NEAR(r[1], 1.6, 1e-15);

  const Vector on{2.0, 1.0};  // 0.6*2 + 0.8*1 = 2
  EXPECT_EQ(project_hyperplane(a.row(0), a.row_sq_norm(0), 2.0, on), on);
}

TEST(ProjectHyperplane, IdempotentAndOrthogonal) {
  const RowMatrix a = random_dense(1, 9, 21);
  const RowView row = a.row(0);
  const double sq = a.row_sq_norm(0);
  for (unsigned t = 0; t < 20; ++t) {
    const Vector x = random_vector(9, 100 + t);
    const double bi = 0.3 * t - 2.0;
    const Vector p = project_hyperplane(row, sq, bi, x);
    EXPECT_NEAR(dot(row, p), bi, 1e-10 * (1 + std::abs(bi)));
    const Vector pp = project_hyperplane(row, sq, bi, p);
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(pp[j], p[j], 1e-12);

    // r on the hyperplane: project an unrelated point
    const Vector r = project_hyperplane(row, sq, bi, random_vector(9, 500 + t));
    double ip = 0;
    for (std::size_t j = 0; j < 9; ++j) ip += (x[j] - p[j]) * (r[j] - p[j]);
    EXPECT_NEAR(ip, 0.0, 1e-10);
  }
}

TEST(ProjectHyperplane, SparseTouchesOnlySupport) {
  const RowMatrix a = RowMatrix::sparse(1, 6, {0, 2}, {1, 4}, {2.0, -1.0});
  const Vector x{1, 2, 3, 4, 5, 6};
  const Vector p = project_hyperplane(a.row(0), a.row_sq_norm(0), 0.5, x);
  for (std::size_t j : {0u, 2u, 3u, 5u}) EXPECT_EQ(p[j], x[j]);
  EXPECT_NE(p[1], x[1]);
}

TEST(ProjectHyperplane, DenseAndSparseAgree) {
  const RowMatrix d = random_dense(5, 8, 31);
  const RowMatrix s = d.to_sparse();
  const Vector x = random_vector(8, 32);
  for (std::size_t i = 0; i < 5; ++i) {
    const Vector pd = project_hyperplane(d.row(i), d.row_sq_norm(i), 1.0, x);
    const Vector ps = project_hyperplane(s.row(i), s.row_sq_norm(i), 1.0, x);
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(pd[j], ps[j], 1e-13 * (1 + std::abs(pd[j])));
  }
}

TEST(ResidualNorm, Examples) {
  const RowMatrix eye = RowMatrix::dense(2, 2, {1, 0, 0, 1});
  EXPECT_DOUBLE_EQ(residual_norm(eye, Vector{0, 0}, Vector{1, 1}), std::sqrt(2.0));
  EXPECT_THROW(residual_norm(eye, Vector{0, 0, 0}, Vector{1, 1}), ShapeMismatch);
  EXPECT_THROW(residual_norm(eye, Vector{0, 0}, Vector{1}), ShapeMismatch);
}

TEST(ResidualNorm, MatchesIndependentEvaluation) {
  const RowMatrix a = random_dense(20, 10, 41);
  const Vector x = random_vector(10, 42);
  const Vector b = random_vector(20, 43);
  const double ref = naive_residual(a, x, b);
  EXPECT_NEAR(residual_norm(a, x, b), ref, 1e-13 * ref);
  EXPECT_NEAR(residual_norm(a.to_sparse(), x, b), ref, 1e-13 * ref);
}

TEST(ResidualNorm, PlantedSolution) {
  const RowMatrix a = random_dense(15, 10, 51);
  const Vector xs = random_vector(10, 52);
  const Vector b = a.multiply(xs);
  EXPECT_LE(residual_norm(a, xs, b), 1e-12 * norm2(b));
}

TEST(Density, Examples) {
  EXPECT_DOUBLE_EQ(density(random_dense(10, 10, 61)).delta, 1.0);
  std::vector<std::size_t> ptr;
  std::vector<std::uint32_t> cols;
  for (std::uint32_t i = 0; i <= 10; ++i) ptr.push_back(i);
  for (std::uint32_t i = 0; i < 10; ++i) cols.push_back(i);
  const RowMatrix eye = RowMatrix::sparse(10, 10, ptr, cols, std::vector<double>(10, 1.0));
  const DensityReport rep = density(eye);
  EXPECT_DOUBLE_EQ(rep.delta, 0.1);
  ASSERT_EQ(rep.per_row_delta.size(), 10u);
  for (double d : rep.per_row_delta) EXPECT_DOUBLE_EQ(d, 0.1);
}

TEST(Density, DenseCountsValueNonzeros) {
  const RowMatrix a = RowMatrix::dense(2, 4, {1, 0, 0, 0, 1, 1, 1, 1});
  const DensityReport rep = density(a);
  EXPECT_DOUBLE_EQ(rep.delta, 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(rep.per_row_delta[0], 0.25);
  // delta is the n-weighted mean of the per-row fractions
  EXPECT_DOUBLE_EQ((rep.per_row_delta[0] + rep.per_row_delta[1]) / 2, rep.delta);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace kaczmarz {

using Vector = std::vector<double>;

/// Read-only view of one matrix row. Dense rows carry no column list; their
/// values cover every column.
struct RowView {
  std::span<const std::uint32_t> cols;
  std::span<const double> vals;
  bool dense = false;

  std::size_t size() const noexcept { return vals.size(); }
};

inline double dot(const RowView& a, std::span<const double> x) noexcept {
  double s = 0.0;
  if (a.dense) {
    for (std::size_t j = 0; j < a.vals.size(); ++j) s += a.vals[j] * x[j];
  } else {
    for (std::size_t p = 0; p < a.vals.size(); ++p) s += a.vals[p] * x[a.cols[p]];
  }
  return s;
}

// y += alpha * a
inline void axpy(double alpha, const RowView& a, std::span<double> y) noexcept {
  if (a.dense) {
    for (std::size_t j = 0; j < a.vals.size(); ++j) y[j] += alpha * a.vals[j];
  } else {
    for (std::size_t p = 0; p < a.vals.size(); ++p) y[a.cols[p]] += alpha * a.vals[p];
  }
}

double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm2(std::span<const double> x) noexcept;
double squared_distance(std::span<const double> x, std::span<const double> y) noexcept;

struct DensityReport {
  double delta = 0.0;
  std::vector<double> per_row_delta;
};

/// Row-major matrix with either dense rows or compressed sparse rows.
///
/// Construction validates the structure (sorted in-range column indices,
/// finite values) and rejects zero rows, then caches every squared row norm.
/// Instances are immutable afterwards.
class RowMatrix {
 public:
  RowMatrix() = default;

  /// `values` holds m*n entries in row-major order.
  static RowMatrix dense(std::size_t m, std::size_t n, std::vector<double> values);

  /// Compressed sparse rows: row i occupies [row_ptr[i], row_ptr[i+1]).
  static RowMatrix sparse(std::size_t m, std::size_t n, std::vector<std::size_t> row_ptr,
                          std::vector<std::uint32_t> cols, std::vector<double> values);

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  bool is_sparse() const noexcept { return sparse_; }

  /// Stored entries (structural nonzeros for sparse storage, m*n for dense).
  std::size_t stored() const noexcept { return values_.size(); }

  RowView row(std::size_t i) const noexcept {
    if (!sparse_) {
      return {{}, std::span<const double>(values_).subspan(i * n_, n_), true};
    }
    const std::size_t lo = row_ptr_[i];
    const std::size_t len = row_ptr_[i + 1] - lo;
    return {std::span<const std::uint32_t>(cols_).subspan(lo, len),
            std::span<const double>(values_).subspan(lo, len), false};
  }

  double row_sq_norm(std::size_t i) const noexcept { return row_sq_norms_[i]; }
  std::span<const double> row_sq_norms() const noexcept { return row_sq_norms_; }

  /// Value at (i, j); zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  Vector multiply(std::span<const double> x) const;
  Vector multiply_transpose(std::span<const double> r) const;

  RowMatrix to_dense() const;
  /// Sparse copy; for dense storage only entries with |v| > 0 are kept.
  RowMatrix to_sparse() const;

  /// Row-major dense copy of the entries.
  std::vector<double> dense_values() const;

 private:
  void finish();

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  bool sparse_ = false;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
  std::vector<double> row_sq_norms_;
};

/// Scale every row to unit Euclidean norm and b by the same factors.
/// Rows whose norm is already exactly 1 are left untouched.
std::pair<RowMatrix, Vector> normalize_rows(const RowMatrix& a, std::span<const double> b);

/// Orthogonal projection of x onto {z : a^T z = b_i}.
Vector project_hyperplane(const RowView& a, double sq_norm, double b_i,
                          std::span<const double> x);

/// ||Ax - b||_2
double residual_norm(const RowMatrix& a, std::span<const double> x, std::span<const double> b);

DensityReport density(const RowMatrix& a);

}  // namespace kaczmarz

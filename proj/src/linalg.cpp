#include "kaczmarz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

constexpr double kZeroRowNorm = 1e-300;

// Overflow/underflow-safe Euclidean norm.
double scaled_norm(std::span<const double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double t = x / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " contains a non-finite entry");
  }
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

double norm2(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - y[j];
    s += d * d;
  }
  return s;
}

RowMatrix RowMatrix::dense(std::size_t m, std::size_t n, std::vector<double> values) {
  if (values.size() != m * n) throw ShapeMismatch("dense matrix: value count does not match m*n");
  RowMatrix a;
  a.m_ = m;
  a.n_ = n;
  a.sparse_ = false;
  a.values_ = std::move(values);
  a.finish();
  return a;
}

RowMatrix RowMatrix::sparse(std::size_t m, std::size_t n, std::vector<std::size_t> row_ptr,
                            std::vector<std::uint32_t> cols, std::vector<double> values) {
  if (row_ptr.size() != m + 1 || row_ptr.front() != 0 || row_ptr.back() != values.size() ||
      cols.size() != values.size()) {
    throw ShapeMismatch("sparse matrix: inconsistent row pointer / index / value arrays");
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) throw TooLarge("column count exceeds 2^32-1");
  for (std::size_t i = 0; i < m; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw InvalidArgument("sparse matrix: row pointers decrease");
    for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      if (cols[p] >= n) throw InvalidArgument("sparse matrix: column index out of range");
      if (p > row_ptr[i] && cols[p] <= cols[p - 1]) {
        throw InvalidArgument("sparse matrix: column indices not strictly increasing in row " +
                              std::to_string(i));
      }
    }
  }
  RowMatrix a;
  a.m_ = m;
  a.n_ = n;
  a.sparse_ = true;
  a.row_ptr_ = std::move(row_ptr);
  a.cols_ = std::move(cols);
  a.values_ = std::move(values);
  a.finish();
  return a;
}

void RowMatrix::finish() {
  require_finite(values_, "matrix");
  row_sq_norms_.resize(m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const RowView r = row(i);
    const double nrm = scaled_norm(r.vals);
    const double sq = nrm * nrm;
    if (nrm < kZeroRowNorm || !(sq > 0.0)) throw ZeroRow(i);
    row_sq_norms_[i] = sq;
  }
}

double RowMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= m_ || j >= n_) throw ShapeMismatch("index out of range");
  if (!sparse_) return values_[i * n_ + j];
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

Vector RowMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw ShapeMismatch("multiply: vector length != column count");
  Vector y(m_);
  for (std::size_t i = 0; i < m_; ++i) y[i] = kaczmarz::dot(row(i), x);
  return y;
}

Vector RowMatrix::multiply_transpose(std::span<const double> r) const {
  if (r.size() != m_) throw ShapeMismatch("multiply_transpose: vector length != row count");
  Vector y(n_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) axpy(r[i], row(i), y);
  return y;
}

std::vector<double> RowMatrix::dense_values() const {
  if (!sparse_) return values_;
  std::vector<double> out(m_ * n_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out[i * n_ + cols_[p]] = values_[p];
  }
  return out;
}

RowMatrix RowMatrix::to_dense() const {
  if (!sparse_) return *this;
  return dense(m_, n_, dense_values());
}

RowMatrix RowMatrix::to_sparse() const {
  if (sparse_) return *this;
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = values_[i * n_ + j];
      if (v != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(j));
        vals.push_back(v);
      }
    }
    ptr.push_back(vals.size());
  }
  return sparse(m_, n_, std::move(ptr), std::move(idx), std::move(vals));
}

std::pair<RowMatrix, Vector> normalize_rows(const RowMatrix& a, std::span<const double> b) {
  if (b.size() != a.rows()) throw ShapeMismatch("normalize_rows: b length != row count");
  const std::size_t m = a.rows();
  std::vector<double> scale(m);
  for (std::size_t i = 0; i < m; ++i) scale[i] = std::sqrt(a.row_sq_norm(i));

  Vector out_b(b.begin(), b.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (scale[i] != 1.0) out_b[i] /= scale[i];
  }

  if (a.is_sparse()) {
    std::vector<std::size_t> ptr{0};
    std::vector<std::uint32_t> idx;
    std::vector<double> vals;
    idx.reserve(a.stored());
    vals.reserve(a.stored());
    for (std::size_t i = 0; i < m; ++i) {
      const RowView r = a.row(i);
      for (std::size_t p = 0; p < r.size(); ++p) {
        idx.push_back(r.cols[p]);
        vals.push_back(scale[i] != 1.0 ? r.vals[p] / scale[i] : r.vals[p]);
      }
      ptr.push_back(vals.size());
    }
    return {RowMatrix::sparse(m, a.cols(), std::move(ptr), std::move(idx), std::move(vals)),
            std::move(out_b)};
  }

  std::vector<double> vals = a.dense_values();
  const std::size_t n = a.cols();
  for (std::size_t i = 0; i < m; ++i) {
    if (scale[i] == 1.0) continue;
    for (std::size_t j = 0; j < n; ++j) vals[i * n + j] /= scale[i];
  }
  return {RowMatrix::dense(m, n, std::move(vals)), std::move(out_b)};
}

Vector project_hyperplane(const RowView& a, double sq_norm, double b_i, std::span<const double> x) {
  Vector r(x.begin(), x.end());
  const double s = (dot(a, x) - b_i) / sq_norm;
  if (s != 0.0) axpy(-s, a, r);
  return r;
}

double residual_norm(const RowMatrix& a, std::span<const double> x, std::span<const double> b) {
  if (x.size() != a.cols() || b.size() != a.rows()) {
    throw ShapeMismatch("residual_norm: operand shapes do not conform");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double r = dot(a.row(i), x) - b[i];
    s += r * r;
  }
  return std::sqrt(s);
}

DensityReport density(const RowMatrix& a) {
  DensityReport rep;
  rep.per_row_delta.resize(a.rows());
  const double n = static_cast<double>(a.cols());
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const RowView r = a.row(i);
    std::size_t count = 0;
    if (a.is_sparse()) {
      count = r.size();
    } else {
      for (double v : r.vals) count += (std::abs(v) > 0.0) ? 1 : 0;
    }
    total += count;
    rep.per_row_delta[i] = static_cast<double>(count) / n;
  }
  const double cells = static_cast<double>(a.rows()) * n;
  rep.delta = cells > 0 ? static_cast<double>(total) / cells : 0.0;
  return rep;
}

}  // namespace kaczmarz

#include "kaczmarz/oracle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

constexpr std::size_t kMaxSweeps = 100;
constexpr std::size_t kDeskScale = 2000;
constexpr double kRankTolerance = 1e-12;

double col_dot(const double* x, const double* y, std::size_t len) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += x[i] * y[i];
  return s;
}

void rotate(double* x, double* y, std::size_t len, double c, double s) noexcept {
  for (std::size_t i = 0; i < len; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace

ThinSvd jacobi_svd(std::vector<double> b, std::size_t rows, std::size_t cols, bool want_v) {
  if (b.size() != rows * cols) throw ShapeMismatch("jacobi_svd: data size != rows*cols");
  std::vector<double> v;
  if (want_v) {
    v.assign(cols * cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) v[j * cols + j] = 1.0;
  }
  auto col = [&](std::size_t j) { return b.data() + j * rows; };

  std::vector<double> norms(cols);
  double frob = 0.0;
  for (std::size_t j = 0; j < cols; ++j) frob += col_dot(col(j), col(j), rows);
  // Columns below eps*||B||_F are numerically zero; rotating them only churns noise.
  const double negligible = DBL_EPSILON * DBL_EPSILON * frob;
  const double tol = DBL_EPSILON * static_cast<double>(std::max<std::size_t>(rows, 1));

  ThinSvd out;
  bool rotated = true;
  while (rotated && out.sweeps < kMaxSweeps) {
    rotated = false;
    ++out.sweeps;
    for (std::size_t j = 0; j < cols; ++j) norms[j] = col_dot(col(j), col(j), rows);
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha <= negligible || beta <= negligible) continue;
        const double gamma = col_dot(col(p), col(q), rows);
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(col(p), col(q), rows, c, s);
        norms[p] = alpha - t * gamma;
        norms[q] = beta + t * gamma;
        if (want_v) rotate(v.data() + p * cols, v.data() + q * cols, cols, c, s);
      }
    }
  }
  if (rotated) throw NumericalFailure("Jacobi SVD did not converge in 100 sweeps");

  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) sv[j] = std::sqrt(col_dot(col(j), col(j), rows));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

  out.rows = rows;
  out.cols = cols;
  out.singular_values.resize(cols);
  out.u.assign(rows * cols, 0.0);
  if (want_v) out.v.resize(cols * cols);
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sv[j];
    if (sv[j] > 0.0) {
      const double* src = col(j);
      double* dst = out.u.data() + k * rows;
      for (std::size_t i = 0; i < rows; ++i) dst[i] = src[i] / sv[j];
    }
    if (want_v) std::copy_n(v.data() + j * cols, cols, out.v.data() + k * cols);
  }
  return out;
}

Vector SpectralData::apply_pseudo_inverse(std::span<const double> x) const {
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = dot(std::span<const double>(pseudo_gram_inverse).subspan(i * n, n), x);
  }
  return out;
}

SpectralData spectral_decompose(const RowMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (std::min(m, n) > kDeskScale) throw TooLarge("spectral_decompose: min(m, n) exceeds 2000");
  if (m == 0 || n == 0) throw EmptyMatrix("spectral_decompose: empty matrix");

  // Row-major A is column-major A^T. Orthogonalizing the columns of A^T gives
  // A^T W = U S, hence A^T A = U S^2 U^T.
  const ThinSvd svd = jacobi_svd(a.dense_values(), n, m, false);

  SpectralData sd;
  sd.n = n;
  const double top = svd.singular_values.front() * svd.singular_values.front();
  const double cutoff = top * static_cast<double>(n) * kRankTolerance;
  for (std::size_t k = 0; k < m; ++k) {
    const double ev = svd.singular_values[k] * svd.singular_values[k];
    if (!(ev > cutoff)) break;
    sd.eigenvalues.push_back(ev);
    sd.eigenvectors.insert(sd.eigenvectors.end(), svd.u.begin() + static_cast<std::ptrdiff_t>(k * n),
                           svd.u.begin() + static_cast<std::ptrdiff_t>((k + 1) * n));
  }
  sd.rank = sd.eigenvalues.size();
  if (sd.rank == 0) throw NumericalFailure("spectral_decompose: A^T A has no nonzero eigenvalue");
  sd.lambda_max = sd.eigenvalues.front();
  sd.lambda_min = sd.eigenvalues.back();

  sd.pseudo_gram_inverse.assign(n * n, 0.0);
  for (std::size_t k = 0; k < sd.rank; ++k) {
    const auto u = sd.eigenvector(k);
    const double inv = 1.0 / sd.eigenvalues[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double ui = u[i] * inv;
      if (ui == 0.0) continue;
      double* row = sd.pseudo_gram_inverse.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += ui * u[j];
    }
  }
  return sd;
}

Vector project_solution_set(const RowMatrix& a, std::span<const double> b,
                            std::span<const double> x, const SpectralData& spectral) {
  if (b.size() != a.rows() || x.size() != a.cols() || spectral.n != a.cols()) {
    throw ShapeMismatch("project_solution_set: operand shapes do not conform");
  }
  Vector r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const Vector d = spectral.apply_pseudo_inverse(a.multiply_transpose(r));
  Vector out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += d[j];
  const double miss = residual_norm(a, out, b);
  if (miss > 1e-8 * (1.0 + norm2(b))) {
    throw Inconsistent("project_solution_set: system appears inconsistent (residual " +
                       std::to_string(miss) + ")");
  }
  return out;
}

double weighted_norm_sq(std::span<const double> v, const SpectralData& spectral) {
  double s = 0.0;
  for (std::size_t k = 0; k < spectral.rank; ++k) {
    const double c = dot(spectral.eigenvector(k), v);
    s += c * c / spectral.eigenvalues[k];
  }
  return s;
}

std::vector<double> row_leverages(const RowMatrix& a, const SpectralData& spectral) {
  std::vector<double> h(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const RowView row = a.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < spectral.rank; ++k) {
      const double c = dot(row, spectral.eigenvector(k));
      s += c * c / spectral.eigenvalues[k];
    }
    h[i] = s;
  }
  return h;
}

LemmaTerms check_lemma1(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        std::span<const double> leverages) {
  const double m = static_cast<double>(a.rows());
  LemmaTerms t;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double r = dot(a.row(i), y) - b[i];
    t.lhs += r * r * leverages[i];
    t.rhs += r * r;
  }
  t.lhs /= m;
  t.rhs /= m;
  return t;
}

LemmaTerms check_lemma1(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        const SpectralData& spectral) {
  const std::vector<double> h = row_leverages(a, spectral);
  return check_lemma1(a, b, y, h);
}

LemmaTerms check_lemma2(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        std::span<const double> x_star) {
  const std::size_t m = a.rows();
  LemmaTerms t;
  for (std::size_t i = 0; i < m; ++i) {
    const Vector p = project_hyperplane(a.row(i), a.row_sq_norm(i), b[i], y);
    t.lhs += squared_distance(p, x_star);
  }
  t.lhs /= static_cast<double>(m);
  const double r = residual_norm(a, y, b);
  t.rhs = squared_distance(y, x_star) - r * r / static_cast<double>(m);
  return t;
}

BoundEnvelope::BoundEnvelope(EnvelopeKind kind, const EnvelopeParams& params)
    : kind_(kind), p_(params) {
  if (p_.m == 0) throw InvalidArgument("envelope: m must be positive");
}

double BoundEnvelope::at_iterate(std::size_t j) const {
  const double jd = static_cast<double>(j);
  const double m = static_cast<double>(p_.m);
  switch (kind_) {
    case EnvelopeKind::RkEq51:
      return p_.initial * std::pow(1.0 - p_.lambda_min / m, jd);
    case EnvelopeKind::ArkThmV:
    case EnvelopeKind::ArkThmX: {
      const double h = std::sqrt(p_.lambda) / (2.0 * m);
      // sigma1^j and sigma2^j through log1p, and their difference through
      // expm1, so small lambda does not cancel.
      const double l1 = jd * std::log1p(h);
      const double l2 = jd * std::log1p(-h);
      if (kind_ == EnvelopeKind::ArkThmV) {
        const double sum = std::exp(l1) + std::exp(l2);
        return 4.0 * p_.initial / (sum * sum);
      }
      const double diff = std::exp(l2) * std::expm1(l1 - l2);
      return 4.0 * p_.lambda * p_.initial / (diff * diff);
    }
    case EnvelopeKind::ArkSublinear:
      return 4.0 * m * m * p_.initial / (jd * jd);
    case EnvelopeKind::CgEq55: {
      const double a = std::sqrt(p_.lambda_max);
      const double c = std::sqrt(p_.lambda_min);
      const double ratio = (a - c) / (a + c);
      return std::pow(ratio, 2.0 * jd) * p_.initial;
    }
  }
  return 0.0;
}

BoundEnvelope bound_envelope(EnvelopeKind kind, const EnvelopeParams& params) {
  if (kind == EnvelopeKind::ArkThmX && params.lambda == 0.0) {
    return BoundEnvelope(EnvelopeKind::ArkSublinear, params);
  }
  return BoundEnvelope(kind, params);
}

}  // namespace kaczmarz

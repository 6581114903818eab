#include "kaczmarz/problem_gen.hpp"

#include <cmath>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/random.hpp"

namespace kaczmarz {

namespace {

Vector normals(CounterRng& rng, std::size_t count) {
  Vector v(count);
  for (double& x : v) x = rng.normal();
  return v;
}

// Normalizes rows, draws x*, and sets b = A x*.
ProblemInstance finish(RowMatrix raw, CounterRng& rng, InstanceMeta meta) {
  const Vector zeros(raw.rows(), 0.0);
  auto [a, unused] = normalize_rows(raw, zeros);
  Vector x_star = normals(rng, a.cols());
  Vector b = a.multiply(x_star);
  meta.m = a.rows();
  meta.n = a.cols();
  return {std::move(a), std::move(b), std::move(x_star), std::move(meta)};
}

}  // namespace

ProblemInstance gen_dense_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw InvalidArgument("gen_dense_gaussian: m and n must be positive");
  CounterRng rng(seed, kGeneratorStreamId);
  RowMatrix raw = RowMatrix::dense(m, n, normals(rng, m * n));
  InstanceMeta meta;
  meta.generator = "dense";
  meta.requested_m = m;
  meta.seed = seed;
  return finish(std::move(raw), rng, std::move(meta));
}

ProblemInstance gen_sparse_gaussian(std::size_t m, std::size_t n, double delta, std::uint64_t seed) {
  if (m == 0 || n == 0) throw InvalidArgument("gen_sparse_gaussian: m and n must be positive");
  if (!(delta > 0.0) || delta > 1.0) throw InvalidArgument("gen_sparse_gaussian: delta must lie in (0, 1]");
  CounterRng rng(seed, kGeneratorStreamId);
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t before = vals.size();
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.uniform01() < delta) {
        const double v = rng.normal();
        if (v != 0.0) {
          cols.push_back(static_cast<std::uint32_t>(j));
          vals.push_back(v);
        }
      }
    }
    if (vals.size() > before) ptr.push_back(vals.size());  // empty rows are dropped
  }
  const std::size_t kept = ptr.size() - 1;
  if (kept == 0) throw EmptyMatrix("gen_sparse_gaussian: every row was empty");
  RowMatrix raw = RowMatrix::sparse(kept, n, std::move(ptr), std::move(cols), std::move(vals));
  InstanceMeta meta;
  meta.generator = "sparse";
  meta.requested_m = m;
  meta.delta = delta;
  meta.seed = seed;
  return finish(std::move(raw), rng, std::move(meta));
}

ProblemInstance gen_spectrum_controlled(std::size_t n, double alpha, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gen_spectrum_controlled: n must be at least 2");
  if (!(alpha > 0.0)) throw InvalidArgument("gen_spectrum_controlled: alpha must be positive");
  CounterRng rng(seed, kGeneratorStreamId);
  // i.i.d. entries, so the fill order only fixes which draw lands where.
  const ThinSvd svd = jacobi_svd(normals(rng, n * n), n, n, true);

  std::vector<double> dense(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::pow(static_cast<double>(k + 1), -alpha);
    const double* u = svd.u.data() + k * n;
    const double* v = svd.v.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double su = s * u[i];
      double* row = dense.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += su * v[j];
    }
  }
  InstanceMeta meta;
  meta.generator = "spectrum";
  meta.requested_m = n;
  meta.alpha = alpha;
  meta.seed = seed;
  ProblemInstance inst = finish(RowMatrix::dense(n, n, std::move(dense)), rng, std::move(meta));
  const SpectralData sd = spectral_decompose(inst.a);
  inst.meta.lambda_min = sd.lambda_min;
  inst.meta.lambda_max = sd.lambda_max;
  return inst;
}

}  // namespace kaczmarz

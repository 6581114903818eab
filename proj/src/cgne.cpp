#include <cmath>

#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/errors.hpp"
#include "kaczmarz/solvers.hpp"
#include "trace_recorder.hpp"

namespace kaczmarz {

namespace {
constexpr std::size_t kResidualRefresh = 50;
}

SolveResult solve_cgne(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                       const SolverConfig& config) {
  detail::check_shapes(a, b, x0);
  if (a.rows() == 0) throw EmptyMatrix("matrix has no rows");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double ops = modeled_ops(SolverKind::Cgne, {m, n, density(a).delta});
  detail::TraceRecorder rec(a, b, config, ops, 1);

  Vector x(x0.begin(), x0.end());
  auto fresh_residual = [&] {
    Vector r = a.multiply(x);
    for (std::size_t i = 0; i < m; ++i) r[i] = b[i] - r[i];
    return r;
  };

  Vector r = fresh_residual();
  Vector s = a.multiply_transpose(r);
  Vector p = s;
  double gamma = dot(s, s);

  bool stop = rec.record(0, x);
  std::size_t k = 0;
  while (!stop && k < config.max_iterations && gamma > 0.0) {
    const Vector q = a.multiply(p);
    const double qq = dot(q, q);
    if (!(qq > 0.0) || !std::isfinite(qq)) {
      throw Breakdown("CGNE: direction curvature p^T A^T A p underflowed at iteration " +
                      std::to_string(k));
    }
    const double step = gamma / qq;
    for (std::size_t j = 0; j < n; ++j) x[j] += step * p[j];
    ++k;
    if (k % kResidualRefresh == 0) {
      r = fresh_residual();
    } else {
      for (std::size_t i = 0; i < m; ++i) r[i] -= step * q[i];
    }
    s = a.multiply_transpose(r);
    const double gamma_next = dot(s, s);
    const double beta = gamma_next / gamma;
    for (std::size_t j = 0; j < n; ++j) p[j] = s[j] + beta * p[j];
    gamma = gamma_next;
    if (rec.due(k)) stop = rec.record(k, x);
  }
  if (!rec.recorded(k)) rec.record(k, x);
  return {std::move(x), rec.take(), k, 0};
}

}  // namespace kaczmarz

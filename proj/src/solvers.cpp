#include "kaczmarz/solvers.hpp"

#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/errors.hpp"
#include "trace_recorder.hpp"

namespace kaczmarz {

namespace {

double per_iteration_cost(SolverKind kind, const RowMatrix& a) {
  return modeled_ops(kind, {a.rows(), a.cols(), density(a).delta});
}

void require_rows(const RowMatrix& a) {
  if (a.rows() == 0) throw EmptyMatrix("matrix has no rows");
}

}  // namespace

SolveResult solve_rk(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                     const SolverConfig& config, IndexStream& stream) {
  detail::check_shapes(a, b, x0);
  require_rows(a);
  const std::size_t m = a.rows();
  detail::TraceRecorder rec(a, b, config, per_iteration_cost(SolverKind::Rk, a), m);

  Vector x(x0.begin(), x0.end());
  bool stop = rec.record(0, x);
  std::size_t k = 0;
  while (!stop && k < config.max_iterations) {
    const std::size_t i = stream.next(m);
    const RowView row = a.row(i);
    const double s = (dot(row, x) - b[i]) / a.row_sq_norm(i);
    if (s != 0.0) axpy(-s, row, x);
    ++k;
    if (rec.due(k)) stop = rec.record(k, x);
  }
  if (!rec.recorded(k)) rec.record(k, x);
  return {std::move(x), rec.take(), k, 0};
}

SolveResult solve_ark_reference(const RowMatrix& a, std::span<const double> b,
                                std::span<const double> x0, const SolverConfig& config,
                                IndexStream& stream) {
  detail::check_shapes(a, b, x0);
  require_rows(a);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ScheduleStream sched(m, config.lambda);
  detail::TraceRecorder rec(a, b, config, per_iteration_cost(SolverKind::ArkReference, a), m);

  Vector x(x0.begin(), x0.end());
  Vector v = x;
  Vector y = x;

  auto form_y = [&](double alpha) {
    for (std::size_t j = 0; j < n; ++j) y[j] = alpha * v[j] + (1.0 - alpha) * x[j];
  };

  bool stop = rec.record(0, x, y, v);
  std::size_t k = 0;
  while (!stop && k < config.max_iterations) {
    const ScheduleStep& st = sched.current();
    form_y(st.alpha);
    const std::size_t i = stream.next(m);
    const RowView row = a.row(i);
    const double s = (dot(row, y) - b[i]) / a.row_sq_norm(i);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = y[j];
      v[j] = st.beta * v[j] + (1.0 - st.beta) * y[j];
    }
    axpy(-s, row, x);
    axpy(-st.gamma * s, row, v);
    sched.advance();
    ++k;
    if (rec.due(k)) {
      form_y(sched.current().alpha);
      stop = rec.record(k, x, y, v);
    }
  }
  if (!rec.recorded(k)) {
    form_y(sched.current().alpha);
    rec.record(k, x, y, v);
  }
  return {std::move(x), rec.take(), k, 0};
}

SolveResult solve_ark_efficient(const RowMatrix& a, std::span<const double> b,
                                std::span<const double> x0, const SolverConfig& config,
                                IndexStream& stream) {
  detail::check_shapes(a, b, x0);
  require_rows(a);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ScheduleStream sched(m, config.lambda);
  detail::TraceRecorder rec(a, b, config, per_iteration_cost(SolverKind::ArkEfficient, a), m);

  Vector x(x0.begin(), x0.end());
  Vector y = x;

  bool stop = rec.record(0, x, y);
  std::size_t k = 0;
  while (!stop && k < config.max_iterations) {
    const ScheduleStep& st = sched.current();
    const std::size_t i = stream.next(m);
    const RowView row = a.row(i);
    const double s = (dot(row, y) - b[i]) / a.row_sq_norm(i);
    // y_{k+1} = P x_k + Q y_k - R s a_i ;  x_{k+1} = y_k - s a_i
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x[j];
      const double yj = y[j];
      x[j] = yj;
      y[j] = st.p * xj + st.q * yj;
    }
    axpy(-s, row, x);
    axpy(-st.r * s, row, y);
    sched.advance();
    ++k;
    if (rec.due(k)) stop = rec.record(k, x, y);
  }
  if (!rec.recorded(k)) rec.record(k, x, y);
  return {std::move(x), rec.take(), k, 0};
}

}  // namespace kaczmarz

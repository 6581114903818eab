#include <cstdint>
#include <vector>

#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/errors.hpp"
#include "kaczmarz/solvers.hpp"
#include "trace_recorder.hpp"

namespace kaczmarz {

namespace {

// The cycle accumulators z and w: dense buffers plus the list of coordinates
// touched in the current cycle. Both vectors share one support.
class CycleAccumulator {
 public:
  explicit CycleAccumulator(std::size_t n) : z_(n, 0.0), w_(n, 0.0), mark_(n, 0) {}

  // (z, w) <- (w, p*z + q*w) on the active support.
  void recombine(double p, double q) noexcept {
    for (std::uint32_t j : active_) {
      const double zt = z_[j];
      const double wt = w_[j];
      z_[j] = wt;
      w_[j] = p * zt + q * wt;
    }
  }

  // z -= s*a, w -= r*s*a; grows the support with the row's pattern.
  void subtract_row(const RowView& a, double s, double r) {
    const double rs = r * s;
    if (a.dense) {
      for (std::size_t j = 0; j < a.vals.size(); ++j) {
        touch(static_cast<std::uint32_t>(j));
        z_[j] -= s * a.vals[j];
        w_[j] -= rs * a.vals[j];
      }
      return;
    }
    for (std::size_t p = 0; p < a.vals.size(); ++p) {
      const std::uint32_t j = a.cols[p];
      touch(j);
      z_[j] -= s * a.vals[p];
      w_[j] -= rs * a.vals[p];
    }
  }

  std::span<const double> z() const noexcept { return z_; }
  std::span<const double> w() const noexcept { return w_; }

  void clear() noexcept {
    for (std::uint32_t j : active_) {
      z_[j] = 0.0;
      w_[j] = 0.0;
      mark_[j] = 0;
    }
    active_.clear();
  }

 private:
  void touch(std::uint32_t j) {
    if (!mark_[j]) {
      mark_[j] = 1;
      active_.push_back(j);
    }
  }

  std::vector<double> z_, w_;
  std::vector<std::uint8_t> mark_;
  std::vector<std::uint32_t> active_;
};

struct CycleScalars {
  double rho = 1.0, tau = 0.0, sigma = 0.0, nu = 1.0;
};

// out = c1*u + c2*v + acc
void combine(double c1, std::span<const double> u, double c2, std::span<const double> v,
             std::span<const double> acc, std::span<double> out) noexcept {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = c1 * u[j] + c2 * v[j] + acc[j];
}

}  // namespace

SolveResult solve_sark(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                       const SolverConfig& config, IndexStream& stream) {
  detail::check_shapes(a, b, x0);
  if (a.rows() == 0) throw EmptyMatrix("matrix has no rows");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double delta = density(a).delta;

  std::size_t cycle = 0;
  double ops_per_iteration = 0.0;
  if (config.cycle_length) {
    cycle = *config.cycle_length;
    if (cycle < 1) throw InvalidCycle("SARK cycle length must be at least 1");
    ops_per_iteration = modeled_ops(SolverKind::Sark, {m, n, delta}, static_cast<double>(cycle));
  } else {
    cycle = auto_cycle_length(delta);
    ops_per_iteration = modeled_ops(SolverKind::Sark, {m, n, delta});
  }

  ScheduleStream sched(m, config.lambda);
  detail::TraceRecorder rec(a, b, config, ops_per_iteration, m);

  Vector xbar(x0.begin(), x0.end());
  Vector ybar = xbar;
  CycleAccumulator acc(n);
  Vector xs(n), ys(n);  // scratch for explicit iterates at trace points

  bool stop = rec.record(0, xbar, ybar);
  const std::size_t budget = config.max_iterations;
  std::size_t k = 0;
  while (!stop && k < budget) {
    CycleScalars c;
    for (std::size_t t = 0; t < cycle && k < budget; ++t) {
      const ScheduleStep& st = sched.current();
      const std::size_t i = stream.next(m);
      const RowView row = a.row(i);

      double ax = 0.0, ay = 0.0, aw = 0.0;
      const auto w = acc.w();
      if (row.dense) {
        for (std::size_t j = 0; j < n; ++j) {
          ax += row.vals[j] * xbar[j];
          ay += row.vals[j] * ybar[j];
          aw += row.vals[j] * w[j];
        }
      } else {
        for (std::size_t p = 0; p < row.size(); ++p) {
          const std::uint32_t j = row.cols[p];
          ax += row.vals[p] * xbar[j];
          ay += row.vals[p] * ybar[j];
          aw += row.vals[p] * w[j];
        }
      }
      const double s = (c.sigma * ax + c.nu * ay + aw - b[i]) / a.row_sq_norm(i);

      const CycleScalars next{c.sigma, c.nu, st.p * c.rho + st.q * c.sigma,
                              st.p * c.tau + st.q * c.nu};
      acc.recombine(st.p, st.q);
      acc.subtract_row(row, s, st.r);
      c = next;
      sched.advance();
      ++k;

      if (rec.due(k)) {
        combine(c.rho, xbar, c.tau, ybar, acc.z(), xs);
        combine(c.sigma, xbar, c.nu, ybar, acc.w(), ys);
        if (rec.record(k, xs, ys)) {
          stop = true;
          break;
        }
      }
    }
    // Close the cycle: make x_k and y_k explicit and restart the cache.
    combine(c.rho, xbar, c.tau, ybar, acc.z(), xs);
    combine(c.sigma, xbar, c.nu, ybar, acc.w(), ys);
    xbar.swap(xs);
    ybar.swap(ys);
    acc.clear();
  }
  if (!rec.recorded(k)) rec.record(k, xbar, ybar);
  return {std::move(xbar), rec.take(), k, cycle};
}

}  // namespace kaczmarz

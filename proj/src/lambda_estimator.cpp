#include "kaczmarz/lambda_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

constexpr double kConservativeExponent = 0.5;
constexpr double kConvergedResidual = 1e-14;

class ResidualProbe {
 public:
  ResidualProbe(const RowMatrix& a, std::span<const double> b, double fraction, std::uint64_t seed)
      : a_(a), b_(b) {
    if (fraction > 0.0) {
      const std::size_t m = a.rows();
      const auto count = static_cast<std::size_t>(
          std::max(1.0, std::ceil(std::min(fraction, 1.0) * static_cast<double>(m))));
      CounterRng rng(seed, kRowSampleStreamId);
      rows_.reserve(count);
      for (std::size_t s = 0; s < count; ++s) rows_.push_back(rng.uniform_index(m));
    }
  }

  double operator()(std::span<const double> x) const {
    if (rows_.empty()) return residual_norm(a_, x, b_);
    double s = 0.0;
    for (std::size_t i : rows_) {
      const double r = dot(a_.row(i), x) - b_[i];
      s += r * r;
    }
    return std::sqrt(s * static_cast<double>(a_.rows()) / static_cast<double>(rows_.size()));
  }

 private:
  const RowMatrix& a_;
  std::span<const double> b_;
  std::vector<std::size_t> rows_;
};

}  // namespace

double lambda_from_residuals(std::size_t m, std::size_t k1, std::size_t k2, double r1, double r2) {
  if (k2 <= k1) throw InvalidArgument("lambda estimate needs k1 < k2");
  const double md = static_cast<double>(m);
  const double ratio = r2 / r1;
  const double est = md * (1.0 - std::pow(ratio, kConservativeExponent / static_cast<double>(k2 - k1)));
  return std::clamp(est, 0.0, md);
}

LambdaEstimate estimate_lambda(const RowMatrix& a, std::span<const double> b,
                               std::span<const double> x0, std::size_t budget, IndexStream& stream,
                               const LambdaEstimatorOptions& options) {
  if (budget < 20) throw InvalidBudget("estimate_lambda: budget must be at least 20 iterations");
  const std::size_t m = a.rows();
  const std::size_t k2 = (budget + 9) / 10;
  const std::size_t k1 = k2 > 10 * m + 1 ? k2 - 10 * m : 1;

  const double rk_cost = modeled_ops(SolverKind::Rk, {m, a.cols(), density(a).delta});
  SolverConfig cfg;
  cfg.residual_stride = options.residual_stride;
  cfg.reference_solution = options.reference_solution;
  cfg.observer = options.observer;
  cfg.max_iterations = k1;
  SolveResult first = solve_rk(a, b, x0, cfg, stream);

  const ResidualProbe probe(a, b, options.row_sample_fraction, stream.seed());
  LambdaEstimate est;
  est.k1 = k1;
  est.k2 = k2;
  est.residual_k1 = probe(first.x);
  if (!(est.residual_k1 > kConvergedResidual)) {
    throw DegenerateResiduals("estimate_lambda: residual already below 1e-14 at K1");
  }

  cfg.max_iterations = k2 - k1;
  cfg.k_offset = k1;
  cfg.ops_offset = rk_cost * static_cast<double>(k1);
  SolveResult second = solve_rk(a, b, first.x, cfg, stream);
  est.residual_k2 = probe(second.x);
  est.lambda_hat = lambda_from_residuals(m, k1, k2, est.residual_k1, est.residual_k2);

  est.trace = std::move(first.trace);
  if (!est.trace.empty() && !second.trace.empty() && est.trace.back().k == second.trace.front().k) {
    est.trace.pop_back();
  }
  est.trace.insert(est.trace.end(), second.trace.begin(), second.trace.end());
  est.warm_start = std::move(second.x);
  return est;
}

}  // namespace kaczmarz

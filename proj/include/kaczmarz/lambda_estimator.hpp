#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

struct LambdaEstimatorOptions {
  /// When positive, ||Ax - b|| is estimated from this fraction of the rows
  /// (drawn once, with replacement) instead of computed in full.
  double row_sample_fraction = 0.0;
  /// Trace settings for the RK warm-up run.
  std::optional<std::size_t> residual_stride;
  std::optional<Vector> reference_solution;
  Observer observer;
};

struct LambdaEstimate {
  double lambda_hat = 0.0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double residual_k1 = 0.0;
  double residual_k2 = 0.0;
  /// x_{K2}: the warm-up iterate the accelerated run should start from.
  Vector warm_start;
  /// Trace of the warm-up RK run.
  Trace trace;
};

/// m * (1 - (r2/r1)^(0.5/(k2-k1))), clamped to [0, m].
double lambda_from_residuals(std::size_t m, std::size_t k1, std::size_t k2, double r1, double r2);

/// Runs RK for K2 = ceil(budget/10) iterations on `stream`, with
/// K1 = max(1, K2 - 10m), and turns the residual decay between x_{K1} and
/// x_{K2} into an estimate of lambda_min.
///
/// Throws InvalidBudget when budget < 20 and DegenerateResiduals when the
/// residual at K1 is already at or below 1e-14.
LambdaEstimate estimate_lambda(const RowMatrix& a, std::span<const double> b,
                               std::span<const double> x0, std::size_t budget, IndexStream& stream,
                               const LambdaEstimatorOptions& options = {});

}  // namespace kaczmarz

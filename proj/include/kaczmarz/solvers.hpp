#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/schedule.hpp"

namespace kaczmarz {

struct TracePoint {
  std::size_t k = 0;
  double modeled_ops = 0.0;
  double residual = 0.0;
  std::optional<double> error_sq;
  std::optional<double> weighted_error_sq;
};

using Trace = std::vector<TracePoint>;

/// Iterates handed to an observer at each trace point. y and v are empty for
/// solvers that do not carry them (v is only kept by the three-sequence ARK).
struct IterateView {
  std::size_t k = 0;
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> v;
};

using Observer = std::function<void(const IterateView&)>;

struct SolverConfig {
  /// Number of row projections (CG iterations for cgne). The solver returns x_K.
  std::size_t max_iterations = 1000;
  /// ARK/SARK parameter, in [0, m].
  double lambda = 0.0;
  /// SARK cycle length T; nullopt selects max(1, round(2/sqrt(delta))).
  std::optional<std::size_t> cycle_length;
  /// Trace every this many iterations; nullopt means m (1 for cgne).
  std::optional<std::size_t> residual_stride;
  /// Stop at the first trace point whose residual is at or below this.
  std::optional<double> target_residual;
  /// When set, trace points carry ||x_k - reference||^2.
  std::optional<Vector> reference_solution;
  /// Added to every trace point's k and modeled_ops (warm-started runs).
  std::size_t k_offset = 0;
  double ops_offset = 0.0;
  Observer observer;
};

struct SolveResult {
  Vector x;
  Trace trace;
  std::size_t iterations = 0;
  /// Cycle length actually used (SARK only).
  std::size_t cycle_length = 0;
};

SolveResult solve_rk(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                     const SolverConfig& config, IndexStream& stream);

/// Three-sequence (x, y, v) accelerated form. Kept as the verification twin of
/// solve_ark_efficient; costs about 11n per iteration.
SolveResult solve_ark_reference(const RowMatrix& a, std::span<const double> b,
                                std::span<const double> x0, const SolverConfig& config,
                                IndexStream& stream);

/// Two-sequence accelerated form using the P/Q/R recombination.
SolveResult solve_ark_efficient(const RowMatrix& a, std::span<const double> b,
                                std::span<const double> x0, const SolverConfig& config,
                                IndexStream& stream);

/// Accelerated Kaczmarz with cached sparse updates: iterates are kept as
/// rho*xbar + tau*ybar + z and sigma*xbar + nu*ybar + w inside each cycle of
/// length T, and made explicit only when a cycle closes.
SolveResult solve_sark(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                       const SolverConfig& config, IndexStream& stream);

/// Conjugate gradient on A^T A x = A^T b without forming A^T A. The recursive
/// residual is refreshed from b - Ax every 50 iterations.
SolveResult solve_cgne(const RowMatrix& a, std::span<const double> b, std::span<const double> x0,
                       const SolverConfig& config);

}  // namespace kaczmarz

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kaczmarz/cost_model.hpp"
#include "kaczmarz/oracle.hpp"
#include "kaczmarz/problem_gen.hpp"

namespace kaczmarz {

enum class LambdaMode { Value, Min, Zero, Auto };

struct SolverSpec {
  SolverKind kind = SolverKind::Rk;
  LambdaMode lambda_mode = LambdaMode::Zero;
  double lambda_value = 0.0;
  /// SARK only; nullopt = automatic cycle length.
  std::optional<std::size_t> cycle_length;

  /// Stable display name, e.g. "rk", "ark(min)", "sark(auto)", "ark(0.001)".
  std::string label() const;
};

struct BenchConfig {
  std::size_t iterations = 1000;
  std::optional<std::size_t> residual_stride;
  std::optional<double> target_residual;
  /// Worker threads; 0 reads KACZMARZ_WORKERS, falling back to the hardware count.
  std::size_t workers = 0;
  double row_sample_fraction = 0.0;
};

struct TraceRow {
  std::string solver;
  std::optional<std::uint64_t> seed;  // nullopt marks the seed-mean row
  std::size_t k = 0;
  double modeled_ops = 0.0;
  double residual = 0.0;
  std::optional<double> error_sq;
  std::optional<double> weighted_error_sq;
  /// Theory bound on error_sq (on residual^2 for cgne) when spectral data is known.
  std::optional<double> envelope;

  bool operator==(const TraceRow&) const = default;
};

struct RunSummary {
  std::string solver;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double lambda = 0.0;
  double final_residual = 0.0;
  double final_ops = 0.0;
};

struct TraceTable {
  std::vector<TraceRow> rows;
  std::vector<RunSummary> runs;
  std::vector<std::string> notes;
};

/// Runs every solver spec once per seed from x0 = 0 and appends a seed-mean
/// trace per solver (mean of residuals, not of their logs).
///
/// With spectral data, error columns measure distance to the projection of
/// x0 onto the solution set and envelopes are attached; otherwise errors are
/// measured against the planted x*. LambdaMode::Min takes lambda_min from
/// `spectral` or the instance metadata. ARK(auto) charges its RK warm-up to
/// the operation count and falls back to lambda = 0 when the estimate is 0.
///
/// Solver failures are rethrown with the solver label and seed prepended.
TraceTable run_benchmark(const ProblemInstance& instance, const std::vector<SolverSpec>& solvers,
                         const std::vector<std::uint64_t>& seeds, const BenchConfig& config,
                         const SpectralData* spectral = nullptr);

/// Resolves the worker count from the argument, KACZMARZ_WORKERS, or hardware.
std::size_t resolve_workers(std::size_t requested);

}  // namespace kaczmarz

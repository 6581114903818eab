#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kaczmarz {

enum class SolverKind { Rk, ArkReference, ArkEfficient, Sark, Cgne };

std::string_view to_string(SolverKind kind) noexcept;
/// Accepts the CLI spellings rk, ark-ref, ark, sark, cgne.
std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept;

struct CostInputs {
  std::size_t m = 0;
  std::size_t n = 0;
  double delta = 1.0;
};

/// Modeled floating-point operations per iteration.
///
///   RK            4 delta n
///   ARK           3n + 6 delta n
///   ARK (3-seq)   11n
///   SARK          6 sqrt(delta) n + 10.5 delta n            (T = 2/sqrt(delta))
///                 1.5 (T-1) delta n + 6n/T + 12 delta n     (explicit T)
///   CGNE          4 delta m n                               (one A^T A product)
///
/// Throws InvalidArgument unless 0 < delta <= 1 and T >= 1.
double modeled_ops(SolverKind kind, const CostInputs& in, std::optional<double> cycle = std::nullopt);

/// Real-valued cost-minimizing SARK cycle length 2/sqrt(delta).
double optimal_cycle(double delta);

/// Integer cycle used for cycle=AUTO: max(1, round(2/sqrt(delta))).
std::size_t auto_cycle_length(double delta);

enum class Region { Rk, Ark, Sark };

std::string_view to_string(Region r) noexcept;

struct RegionVerdict {
  double delta = 1.0;
  double lambda_min = 0.0;
  Region best = Region::Ark;
};

/// lambda threshold above which RK is approximately best.
double rk_region_threshold(double delta);
/// lambda threshold below which SARK is approximately best (when delta <= 0.1).
double sark_region_threshold(double delta);

RegionVerdict classify_region(double delta, double lambda_min);

/// Verdict grid, rows indexed by delta and columns by lambda.
std::vector<std::vector<RegionVerdict>> sweep_regions(const std::vector<double>& deltas,
                                                      const std::vector<double>& lambdas);

/// CSV with header "delta,lambda_min,best", one line per cell in delta-major order.
std::string regions_csv(const std::vector<std::vector<RegionVerdict>>& grid);

}  // namespace kaczmarz

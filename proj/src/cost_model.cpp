#include "kaczmarz/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::Rk: return "rk";
    case SolverKind::ArkReference: return "ark-ref";
    case SolverKind::ArkEfficient: return "ark";
    case SolverKind::Sark: return "sark";
    case SolverKind::Cgne: return "cgne";
  }
  return "?";
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) noexcept {
  if (name == "rk") return SolverKind::Rk;
  if (name == "ark-ref") return SolverKind::ArkReference;
  if (name == "ark") return SolverKind::ArkEfficient;
  if (name == "sark") return SolverKind::Sark;
  if (name == "cgne") return SolverKind::Cgne;
  return std::nullopt;
}

double modeled_ops(SolverKind kind, const CostInputs& in, std::optional<double> cycle) {
  const double d = in.delta;
  if (!(d > 0.0) || d > 1.0) throw InvalidArgument("modeled_ops: delta must lie in (0, 1]");
  const double n = static_cast<double>(in.n);
  switch (kind) {
    case SolverKind::Rk: return 4.0 * d * n;
    case SolverKind::ArkEfficient: return 3.0 * n + 6.0 * d * n;
    case SolverKind::ArkReference: return 11.0 * n;
    case SolverKind::Sark:
      if (cycle) {
        const double t = *cycle;
        if (!(t >= 1.0)) throw InvalidArgument("modeled_ops: cycle length must be >= 1");
        return 1.5 * (t - 1.0) * d * n + 6.0 * n / t + 12.0 * d * n;
      }
      return 6.0 * std::sqrt(d) * n + 10.5 * d * n;
    case SolverKind::Cgne: return 4.0 * d * static_cast<double>(in.m) * n;
  }
  return 0.0;
}

double optimal_cycle(double delta) { return 2.0 / std::sqrt(delta); }

std::size_t auto_cycle_length(double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw InvalidArgument("auto cycle: delta must lie in (0, 1]");
  const double t = std::round(optimal_cycle(delta));
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::Rk: return "RK";
    case Region::Ark: return "ARK";
    case Region::Sark: return "SARK";
  }
  return "?";
}

double rk_region_threshold(double delta) {
  const double a = 4.0 * delta / (3.0 + 6.0 * delta);
  return std::max(a * a, sark_region_threshold(delta));
}

double sark_region_threshold(double delta) {
  const double sd = std::sqrt(delta);
  const double b = 4.0 * sd / (6.0 + 10.5 * sd);
  return b * b;
}

RegionVerdict classify_region(double delta, double lambda_min) {
  if (!(delta > 0.0) || delta > 1.0) throw InvalidArgument("classify_region: delta must lie in (0, 1]");
  if (!(lambda_min > 0.0)) throw InvalidArgument("classify_region: lambda_min must be positive");
  RegionVerdict v{delta, lambda_min, Region::Ark};
  if (lambda_min >= rk_region_threshold(delta)) {
    v.best = Region::Rk;
  } else if (lambda_min <= sark_region_threshold(delta) && delta <= 0.1) {
    v.best = Region::Sark;
  }
  return v;
}

std::vector<std::vector<RegionVerdict>> sweep_regions(const std::vector<double>& deltas,
                                                      const std::vector<double>& lambdas) {
  if (deltas.empty() || lambdas.empty()) throw InvalidArgument("sweep_regions: empty grid");
  std::vector<std::vector<RegionVerdict>> grid;
  grid.reserve(deltas.size());
  for (double d : deltas) {
    auto& row = grid.emplace_back();
    row.reserve(lambdas.size());
    for (double l : lambdas) row.push_back(classify_region(d, l));
  }
  return grid;
}

std::string regions_csv(const std::vector<std::vector<RegionVerdict>>& grid) {
  std::string out = "delta,lambda_min,best\n";
  char buf[96];
  for (const auto& row : grid) {
    for (const auto& c : row) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", c.delta, c.lambda_min);
      out += buf;
      out += to_string(c.best);
      out += '\n';
    }
  }
  return out;
}

}  // namespace kaczmarz

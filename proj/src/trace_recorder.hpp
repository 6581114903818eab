#pragma once

#include <cstddef>
#include <span>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz::detail {

inline void check_shapes(const RowMatrix& a, std::span<const double> b, std::span<const double> x0) {
  if (b.size() != a.rows()) throw ShapeMismatch("b length does not match the row count");
  if (x0.size() != a.cols()) throw ShapeMismatch("x0 length does not match the column count");
}

// Samples the residual (and optional error) every `stride` iterations, counted
// from k_offset's origin, and at the start and end of a run. Residual evaluation is not charged to the modeled cost.
class TraceRecorder {
 public:
  TraceRecorder(const RowMatrix& a, std::span<const double> b, const SolverConfig& config,
                double ops_per_iteration, std::size_t default_stride)
      : a_(a), b_(b), config_(config), ops_per_iteration_(ops_per_iteration),
        stride_(config.residual_stride.value_or(default_stride)) {
    if (stride_ == 0) throw InvalidArgument("residual_stride must be at least 1");
    if (config.reference_solution && config.reference_solution->size() != a.cols()) {
      throw ShapeMismatch("reference solution length does not match the column count");
    }
  }

  bool due(std::size_t k) const noexcept { return (config_.k_offset + k) % stride_ == 0; }

  // Returns true when the target residual has been reached.
  bool record(std::size_t k, std::span<const double> x, std::span<const double> y = {},
              std::span<const double> v = {}) {
    TracePoint p;
    p.k = config_.k_offset + k;
    p.modeled_ops = config_.ops_offset + ops_per_iteration_ * static_cast<double>(k);
    p.residual = residual_norm(a_, x, b_);
    if (config_.reference_solution) p.error_sq = squared_distance(x, *config_.reference_solution);
    trace_.push_back(p);
    last_k_ = k;
    if (config_.observer) config_.observer(IterateView{p.k, x, y, v});
    return config_.target_residual && p.residual <= *config_.target_residual;
  }

  bool recorded(std::size_t k) const noexcept { return !trace_.empty() && last_k_ == k; }

  Trace take() { return std::move(trace_); }

 private:
  const RowMatrix& a_;
  std::span<const double> b_;
  const SolverConfig& config_;
  double ops_per_iteration_;
  std::size_t stride_;
  Trace trace_;
  std::size_t last_k_ = 0;
};

}  // namespace kaczmarz::detail

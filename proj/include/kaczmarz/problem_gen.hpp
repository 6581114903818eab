#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

struct InstanceMeta {
  std::string generator;
  std::size_t m = 0;  // rows actually present (after zero-row removal)
  std::size_t n = 0;
  std::size_t requested_m = 0;
  double delta = 1.0;  // requested density (sparse generator)
  double alpha = 0.0;  // spectral decay exponent (spectrum generator)
  std::uint64_t seed = 0;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
};

/// Consistent system with unit-norm rows and b = A x*.
struct ProblemInstance {
  RowMatrix a;
  Vector b;
  Vector x_star;
  InstanceMeta meta;
};

// All generators draw from CounterRng(seed, kGeneratorStreamId): matrix entries
// in row-major order first, then x*. They are pure functions of their inputs.

/// i.i.d. N(0,1) entries and x*, rows normalized, dense storage.
ProblemInstance gen_dense_gaussian(std::size_t m, std::size_t n, std::uint64_t seed);

/// Each entry kept with probability delta (one uniform draw per entry, then a
/// normal for kept entries). All-zero rows are dropped before normalization.
/// Sparse storage. Throws EmptyMatrix if every row came out empty.
ProblemInstance gen_sparse_gaussian(std::size_t m, std::size_t n, double delta, std::uint64_t seed);

/// U diag(i^-alpha) V^T from the SVD of an n x n Gaussian matrix, then rows
/// normalized. meta carries the extreme nonzero eigenvalues of the final A^T A.
ProblemInstance gen_spectrum_controlled(std::size_t n, double alpha, std::uint64_t seed);

}  // namespace kaczmarz

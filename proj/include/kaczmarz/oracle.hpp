#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/linalg.hpp"

namespace kaczmarz {

/// Thin SVD B = U diag(s) V^T of a dense column-major rows x cols matrix,
/// singular values sorted in decreasing order.
struct ThinSvd {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> singular_values;  // cols entries
  std::vector<double> u;                // rows x cols, column-major; zero columns where s == 0
  std::vector<double> v;                // cols x cols, column-major; empty unless requested
  std::size_t sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Throws NumericalFailure if the column
/// pairs are not orthogonal after 100 sweeps.
ThinSvd jacobi_svd(std::vector<double> column_major, std::size_t rows, std::size_t cols,
                   bool want_v);

/// Nonzero spectrum of A^T A and its Moore-Penrose pseudoinverse.
struct SpectralData {
  std::size_t n = 0;
  double lambda_min = 0.0;  // smallest nonzero eigenvalue
  double lambda_max = 0.0;
  std::size_t rank = 0;
  std::vector<double> eigenvalues;   // rank entries, decreasing
  std::vector<double> eigenvectors;  // rank vectors of length n, stored back to back
  std::vector<double> pseudo_gram_inverse;  // n x n, row-major

  std::span<const double> eigenvector(std::size_t j) const {
    return std::span<const double>(eigenvectors).subspan(j * n, n);
  }

  /// (A^T A)^+ v
  Vector apply_pseudo_inverse(std::span<const double> v) const;
};

/// Eigenvalues below lambda_max * n * 1e-12 are treated as zero.
/// Throws TooLarge when min(m, n) > 2000.
SpectralData spectral_decompose(const RowMatrix& a);

/// x + (A^T A)^+ A^T (b - Ax), the orthogonal projection of x onto {z : Az = b}.
/// Throws Inconsistent when the result misses Az = b by more than 1e-8 (relative).
Vector project_solution_set(const RowMatrix& a, std::span<const double> b,
                            std::span<const double> x, const SpectralData& spectral);

/// v^T (A^T A)^+ v
double weighted_norm_sq(std::span<const double> v, const SpectralData& spectral);

struct LemmaTerms {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// a_i^T (A^T A)^+ a_i for every row.
std::vector<double> row_leverages(const RowMatrix& a, const SpectralData& spectral);

/// Exact uniform expectation of ||a_i (a_i^T y - b_i)||^2 in the (A^T A)^+ norm
/// (lhs) against ||Ay - b||^2 / m (rhs). Rows are assumed unit-norm.
LemmaTerms check_lemma1(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        std::span<const double> leverages);
LemmaTerms check_lemma1(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        const SpectralData& spectral);

/// Exact uniform expectation of ||P_i(y) - x*||^2 (lhs) against
/// ||y - x*||^2 - ||Ay - b||^2 / m (rhs). Rows are assumed unit-norm, Ax* = b.
LemmaTerms check_lemma2(const RowMatrix& a, std::span<const double> b, std::span<const double> y,
                        std::span<const double> x_star);

enum class EnvelopeKind { RkEq51, ArkThmV, ArkThmX, ArkSublinear, CgEq55 };

struct EnvelopeParams {
  std::size_t m = 1;
  /// ARK lambda for the Theorem kinds; lambda_min for RK.
  double lambda = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// RK: ||x0 - P(x0)||^2.   ARK kinds: ||x0 - x*||^2 in the (A^T A)^+ norm.
  /// CG: ||A x0 - b||^2.
  double initial = 0.0;
};

/// Theoretical bound on the expected squared error after a number of iterations.
///
///   RkEq51        initial * (1 - lambda_min/m)^j
///   ArkThmV       4 initial / (sigma1^j + sigma2^j)^2            (v iterates, weighted norm)
///   ArkThmX       4 lambda initial / (sigma1^j - sigma2^j)^2     (x iterates)
///   ArkSublinear  4 m^2 initial / j^2
///   CgEq55        ((sqrt(lmax) - sqrt(lmin)) / (sqrt(lmax) + sqrt(lmin)))^(2j) initial
///
/// where j counts completed iterations. operator()(k) uses the k+1 indexing of
/// the theory statements, i.e. it bounds iterate k+1.
class BoundEnvelope {
 public:
  BoundEnvelope(EnvelopeKind kind, const EnvelopeParams& params);

  EnvelopeKind kind() const noexcept { return kind_; }
  double at_iterate(std::size_t j) const;
  double operator()(std::size_t k) const { return at_iterate(k + 1); }

 private:
  EnvelopeKind kind_;
  EnvelopeParams p_;
};

/// ArkThmX with lambda == 0 is mapped to ArkSublinear (its lambda -> 0 limit).
BoundEnvelope bound_envelope(EnvelopeKind kind, const EnvelopeParams& params);

}  // namespace kaczmarz

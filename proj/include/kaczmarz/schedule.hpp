#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kaczmarz {

/// Scalars driving iteration k of accelerated Kaczmarz.
///
/// gamma is the larger root of g^2 - g/m = (1 - g*lambda/m) * gamma_prev^2,
/// alpha = (m - gamma*lambda) / (gamma*(m^2 - lambda)), beta = 1 - gamma*lambda/m.
/// p, q, r combine the current scalars with alpha of the next step:
///   p = alpha'(1 - m*gamma), q = 1 - alpha' + m*alpha'*gamma, r = 1 - alpha' + alpha'*gamma.
struct ScheduleStep {
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Streaming evaluation of the schedule recurrence, one k at a time, for runs
/// whose length is not known up front.
class ScheduleStream {
 public:
  /// Throws InvalidLambda unless m >= 1 and 0 <= lambda <= m.
  ScheduleStream(std::size_t m, double lambda);

  std::size_t k() const noexcept { return k_; }
  double gamma_prev() const noexcept { return gamma_prev_; }
  const ScheduleStep& current() const noexcept { return cur_; }
  void advance();

 private:
  double next_gamma(double prev) const;
  double alpha_for(double gamma, double prev) const;
  void fill_pqr();

  double m_;
  double lambda_;
  std::size_t k_ = 0;
  double gamma_prev_ = 0.0;
  ScheduleStep cur_;
  double next_gamma_ = 0.0;
  double next_alpha_ = 0.0;
};

/// Precomputed schedule for k = 0..horizon.
class AccelSchedule {
 public:
  AccelSchedule() = default;

  std::size_t m() const noexcept { return m_; }
  double lambda() const noexcept { return lambda_; }
  std::size_t horizon() const noexcept { return alpha_.size() == 0 ? 0 : alpha_.size() - 1; }

  /// k >= -1; gamma(-1) == 0.
  double gamma(long k) const { return gamma_[static_cast<std::size_t>(k + 1)]; }
  double alpha(std::size_t k) const { return alpha_[k]; }
  double beta(std::size_t k) const { return beta_[k]; }
  double p(std::size_t k) const { return p_[k]; }
  double q(std::size_t k) const { return q_[k]; }
  double r(std::size_t k) const { return r_[k]; }

  /// gamma_{-1} .. gamma_K (K+2 entries).
  std::span<const double> gammas() const noexcept { return gamma_; }
  std::span<const double> alphas() const noexcept { return alpha_; }
  std::span<const double> betas() const noexcept { return beta_; }
  std::span<const double> ps() const noexcept { return p_; }
  std::span<const double> qs() const noexcept { return q_; }
  std::span<const double> rs() const noexcept { return r_; }

 private:
  friend AccelSchedule build_schedule(std::size_t m, double lambda, std::size_t horizon);

  std::size_t m_ = 0;
  double lambda_ = 0.0;
  std::vector<double> gamma_;
  std::vector<double> alpha_, beta_;
  std::vector<double> p_, q_, r_;
};

/// Schedule covering k = 0..horizon. lambda must lie in [0, m]; values above
/// the smallest nonzero eigenvalue of A^T A are accepted but void the
/// convergence guarantee.
AccelSchedule build_schedule(std::size_t m, double lambda, std::size_t horizon);

struct RateConstants {
  double sigma1 = 1.0;
  double sigma2 = 1.0;

  /// Asymptotic per-iteration decrease factor 1/sigma1^2.
  double decrease_factor() const noexcept { return 1.0 / (sigma1 * sigma1); }
};

/// sigma1 = 1 + sqrt(lambda)/(2m), sigma2 = 1 - sqrt(lambda)/(2m).
RateConstants rate_constants(std::size_t m, double lambda);

/// First-order estimate 1 - sqrt(lambda)/m of the decrease factor.
double approximate_decrease_factor(std::size_t m, double lambda);

}  // namespace kaczmarz

#include "kaczmarz/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kaczmarz/errors.hpp"

namespace kaczmarz {

namespace {

void check_lambda(std::size_t m, double lambda) {
  if (m == 0) throw InvalidArgument("schedule: m must be at least 1");
  if (!(lambda >= 0.0) || !(lambda <= static_cast<double>(m))) {
    throw InvalidLambda("lambda must lie in [0, m]; got " + std::to_string(lambda));
  }
}

}  // namespace

ScheduleStream::ScheduleStream(std::size_t m, double lambda)
    : m_(static_cast<double>(m)), lambda_(lambda) {
  check_lambda(m, lambda);
  const double g0 = next_gamma(0.0);
  cur_.gamma = g0;
  cur_.alpha = alpha_for(g0, 0.0);
  cur_.beta = 1.0 - g0 * lambda_ / m_;
  next_gamma_ = next_gamma(g0);
  next_alpha_ = alpha_for(next_gamma_, g0);
  fill_pqr();
}

double ScheduleStream::next_gamma(double prev) const {
  // Larger root of g^2 - c*g - prev^2 = 0. c >= 0 while prev <= 1/sqrt(lambda),
  // so the additive form has no cancellation.
  const double c = (1.0 - lambda_ * prev * prev) / m_;
  double g = 0.5 * (c + std::sqrt(c * c + 4.0 * prev * prev));
  if (lambda_ > 0.0) {
    // The fixed point 1/sqrt(lambda) is an upper bound; keep rounding from crossing it.
    g = std::min(g, 1.0 / std::sqrt(lambda_));
  }
  return g;
}

double ScheduleStream::alpha_for(double gamma, double prev) const {
  const double denom = gamma * (m_ * m_ - lambda_);
  if (denom > 0.0) return (m_ - gamma * lambda_) / denom;
  // m == 1 and lambda == 1: the quotient above is 0/0. Use the equivalent
  // form (1 - alpha)/alpha = m*prev^2/gamma implied by the recurrence.
  return gamma / (gamma + m_ * prev * prev);
}

void ScheduleStream::fill_pqr() {
  const double a1 = next_alpha_;
  cur_.p = a1 * (1.0 - m_ * cur_.gamma);
  cur_.q = 1.0 - a1 + m_ * a1 * cur_.gamma;
  cur_.r = 1.0 - a1 + a1 * cur_.gamma;
}

void ScheduleStream::advance() {
  gamma_prev_ = cur_.gamma;
  cur_.gamma = next_gamma_;
  cur_.alpha = next_alpha_;
  cur_.beta = 1.0 - cur_.gamma * lambda_ / m_;
  next_gamma_ = next_gamma(cur_.gamma);
  next_alpha_ = alpha_for(next_gamma_, cur_.gamma);
  fill_pqr();
  ++k_;
}

AccelSchedule build_schedule(std::size_t m, double lambda, std::size_t horizon) {
  ScheduleStream stream(m, lambda);
  AccelSchedule s;
  s.m_ = m;
  s.lambda_ = lambda;
  const std::size_t len = horizon + 1;
  s.gamma_.reserve(len + 1);
  s.alpha_.reserve(len);
  s.beta_.reserve(len);
  s.p_.reserve(len);
  s.q_.reserve(len);
  s.r_.reserve(len);
  s.gamma_.push_back(0.0);
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) stream.advance();
    const ScheduleStep& st = stream.current();
    s.gamma_.push_back(st.gamma);
    s.alpha_.push_back(st.alpha);
    s.beta_.push_back(st.beta);
    s.p_.push_back(st.p);
    s.q_.push_back(st.q);
    s.r_.push_back(st.r);
  }
  return s;
}

RateConstants rate_constants(std::size_t m, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidLambda("lambda must be nonnegative");
  const double h = std::sqrt(lambda) / (2.0 * static_cast<double>(m));
  return {1.0 + h, 1.0 - h};
}

double approximate_decrease_factor(std::size_t m, double lambda) {
  return 1.0 - std::sqrt(lambda) / static_cast<double>(m);
}

}  // namespace kaczmarz

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/schedule.hpp"

using namespace kaczmarz;

namespace {

// Textbook quadratic formula in extended precision, written independently of
// the library's form.
std::vector<long double> gamma_oracle(long double m, long double lambda, std::size_t horizon) {
  std::vector<long double> g{0.0L};
  for (std::size_t k = 0; k <= horizon; ++k) {
    const long double prev = g.back();
    // g^2 + B g + C = 0
    const long double B = -(1.0L - lambda * prev * prev) / m;
    const long double C = -prev * prev;
    g.push_back((-B + std::sqrt(B * B - 4.0L * C)) / 2.0L);
  }
  return g;
}

}  // namespace

TEST(Schedule, InitialValues) {
  for (std::size_t m : {1u, 2u, 10u, 100u, 1000u}) {
    for (double lam : {0.0, 1e-6, 0.01 * m, double(m)}) {
      const AccelSchedule s = build_schedule(m, lam, 5);
      EXPECT_EQ(s.gamma(-1), 0.0);
      EXPECT_NEAR(s.gamma(0), 1.0 / m, 1e-15);
      EXPECT_NEAR(s.alpha(0), 1.0, 1e-12) << m << " " << lam;
      EXPECT_NEAR(s.beta(0), 1.0 - lam / (double(m) * m), 1e-15);
    }
  }
}

TEST(Schedule, MatchesExtendedPrecisionRecurrence) {
  for (double lam : {0.0, 1e-4, 0.5}) {
    const std::size_t m = 100, K = 2000;
    const AccelSchedule s = build_schedule(m, lam, K);
    const auto ref = gamma_oracle(m, lam, K);
    for (std::size_t k = 0; k <= K; ++k) {
      const double r = static_cast<double>(ref[k + 1]);
      EXPECT_NEAR(s.gamma(static_cast<long>(k)), r, 1e-12 * r) << "lambda " << lam << " k " << k;
    }
  }
}

TEST(Schedule, GammaOneForM100LambdaZero) {
  const AccelSchedule s = build_schedule(100, 0.0, 1);
  // gamma_1^2 - gamma_1/100 = 1e-4  ->  gamma_1 = (0.01 + sqrt(1e-4 + 4e-4)) / 2
  EXPECT_NEAR(s.gamma(1), (0.01 + std::sqrt(5e-4)) / 2, 1e-16);
}

TEST(Schedule, Invariants) {
  for (std::size_t m : {1u, 2u, 10u, 100u, 1000u}) {
    for (double lam : {0.0, 1e-6, 0.01 * m, double(m)}) {
      const std::size_t K = 3000;
      const AccelSchedule s = build_schedule(m, lam, K);
      const double md = double(m);
      ASSERT_EQ(s.gammas().size(), K + 2);
      ASSERT_EQ(s.alphas().size(), K + 1);
      for (std::size_t k = 0; k <= K; ++k) {
        const double g = s.gamma(long(k)), gp = s.gamma(long(k) - 1);
        EXPECT_GE(g, gp);
        EXPECT_GE(g, 1.0 / md * (1 - 1e-15));
        if (lam > 0) EXPECT_LE(g, 1.0 / std::sqrt(lam) * (1 + 1e-15));
        EXPECT_GE(s.alpha(k), 0.0);
        EXPECT_LE(s.alpha(k), 1.0 + 1e-15);
        EXPECT_GE(s.beta(k), 0.0);
        EXPECT_LE(s.beta(k), 1.0);
        const double scale = g * g + gp * gp + g / md;
        EXPECT_LE(std::abs(g * g - g / md - (1 - g * lam / md) * gp * gp), 1e-12 * std::max(1.0, scale));
        EXPECT_LE(std::abs(g * g - g / md - s.beta(k) * gp * gp), 1e-12 * std::max(1.0, scale));
        const double lhs = (1 - s.alpha(k)) / s.alpha(k), rhs = md * gp * gp / g;
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(Schedule, PqrFromNextAlpha) {
  const AccelSchedule s = build_schedule(50, 0.01, 100);
  for (std::size_t k = 0; k < 100; ++k) {
    const double a1 = s.alpha(k + 1), g = s.gamma(long(k));
    EXPECT_DOUBLE_EQ(s.p(k), a1 * (1 - 50 * g));
    EXPECT_DOUBLE_EQ(s.q(k), 1 - a1 + 50 * a1 * g);
    EXPECT_DOUBLE_EQ(s.r(k), 1 - a1 + a1 * g);
  }
}

TEST(Schedule, LambdaZeroBetaOne) {
  const AccelSchedule s = build_schedule(10, 0.0, 500);
  for (double b : s.betas()) EXPECT_EQ(b, 1.0);
}

TEST(Schedule, ConvergesToFixedPoint) {
  const std::size_t m = 10;
  const double lam = 0.04;
  const auto K = static_cast<std::size_t>(50.0 * m / std::sqrt(lam));
  const AccelSchedule s = build_schedule(m, lam, K);
  EXPECT_GE(s.gamma(long(K)), 0.99 / std::sqrt(lam));
}

TEST(Schedule, StreamMatchesPrecomputed) {
  const AccelSchedule s = build_schedule(30, 0.2, 200);
  ScheduleStream st(30, 0.2);
  for (std::size_t k = 0; k <= 200; ++k, st.advance()) {
    EXPECT_EQ(st.k(), k);
    EXPECT_EQ(st.current().gamma, s.gamma(long(k)));
    EXPECT_EQ(st.current().alpha, s.alpha(k));
    EXPECT_EQ(st.current().q, s.q(k));
  }
}

TEST(Schedule, RejectsBadLambda) {
  EXPECT_THROW(build_schedule(10, -1e-9, 5), InvalidLambda);
  EXPECT_THROW(build_schedule(10, 10.5, 5), InvalidLambda);
  EXPECT_THROW(build_schedule(10, std::nan(""), 5), InvalidLambda);
  EXPECT_THROW(build_schedule(0, 0.0, 5), InvalidArgument);
  EXPECT_NO_THROW(build_schedule(10, 10.0, 5));
}

TEST(RateConstants, Examples) {
  const RateConstants z = rate_constants(10, 0.0);
  EXPECT_EQ(z.sigma1, 1.0);
  EXPECT_EQ(z.sigma2, 1.0);
  const RateConstants r = rate_constants(100, 0.01);
  EXPECT_NEAR(r.sigma1, 1.0005, 1e-15);
  EXPECT_NEAR(r.sigma2, 0.9995, 1e-15);
  EXPECT_NEAR(r.sigma1 * r.sigma2, 1 - 0.01 / (4 * 100.0 * 100.0), 1e-14);
  const RateConstants big = rate_constants(1000, 0.0006);
  EXPECT_NEAR(big.decrease_factor(), 1 - std::sqrt(0.0006) / 1000, 1e-6);
  EXPECT_NEAR(approximate_decrease_factor(1000, 0.0006), 1 - std::sqrt(0.0006) / 1000, 1e-16);
}

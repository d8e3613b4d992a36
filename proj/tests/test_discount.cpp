#include <gtest/gtest.h>

#include <cmath>

#include "pblab/discount.hpp"
#include "pblab/errors.hpp"

namespace pblab {
namespace {

const double kLn2 = std::log(2.0);

AgentParams exponential(double k, double alpha = 2.0) {
  return AgentParams(DiscountModel::exponential(k), alpha);
}
AgentParams hyperbolic(double k, double alpha = 2.0) {
  return AgentParams(DiscountModel::hyperbolic(k), alpha);
}

TEST(DiscountFactor, Examples) {
  EXPECT_EQ(discount_factor(DiscountModel::exponential(1.0), 0, 0), 1.0);
  EXPECT_NEAR(discount_factor(DiscountModel::exponential(kLn2), 0, 1), 0.5, 1e-15);
  EXPECT_EQ(discount_factor(DiscountModel::hyperbolic(1.0), 0, 1), 0.5);
}

TEST(DiscountFactor, DependsOnDelayOnly) {
  const auto m = DiscountModel::hyperbolic(0.7);
  EXPECT_DOUBLE_EQ(discount_factor(m, 1.5, 4.0), discount_factor(m, 0.0, 2.5));
}

TEST(DiscountFactor, RejectsPastTimes) {
  EXPECT_THROW(discount_factor(DiscountModel::exponential(1.0), 1, 0.5),
               DomainError);
}

TEST(DiscountFactor, LogFormSurvivesUnderflow) {
  const auto m = DiscountModel::exponential(10.0);
  EXPECT_EQ(discount_factor(m, 0, 100), 0.0);
  EXPECT_NEAR(log_discount_factor(m, 0, 100), -1000.0, 1e-9);
}

TEST(DiscountModel, RejectsBadParameters) {
  EXPECT_THROW(DiscountModel::exponential(0.0), ConfigError);
  EXPECT_THROW(DiscountModel::hyperbolic(-1.0), ConfigError);
  EXPECT_THROW(DiscountModel::generic(nullptr), ConfigError);
  try {
    AgentParams(DiscountModel::exponential(1.0), 1.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "alpha");
    EXPECT_STREQ(e.what(), "alpha must exceed 1");
  }
}

TEST(DiscountModel, GenericOutsideUnitIntervalThrows) {
  const auto m = DiscountModel::generic([](double, double) { return 1.5; });
  EXPECT_THROW(discount_factor(m, 0, 1), ConfigError);
}

TEST(BigGamma, Examples) {
  EXPECT_DOUBLE_EQ(big_gamma(exponential(1.0), 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(big_gamma(hyperbolic(1.0), 0, 1), 2.0);
}

TEST(BigGamma, DerivativeIsInverseDiscountPower) {
  for (const AgentParams& p : {exponential(0.8, 2.5), hyperbolic(1.3, 3.0)}) {
    const double s = 1.1;
    const double h = 1e-5;
    const double slope = (big_gamma(p, 0.2, s + h) - big_gamma(p, 0.2, s - h)) / (2 * h);
    const double expected =
        std::pow(discount_factor(p.discount(), 0.2, s), -1.0 / (p.alpha() - 1.0));
    EXPECT_NEAR(slope, expected, 1e-8 * expected);
  }
}

TEST(GammaDifference, MatchesGenericQuadrature) {
  const AgentParams closed = hyperbolic(0.9, 2.5);
  const AgentParams numeric(
      DiscountModel::generic([](double t, double s) { return 1 / (1 + 0.9 * (s - t)); }),
      2.5);
  EXPECT_NEAR(gamma_difference(closed, 0.3, 0.5, 2.0),
              gamma_difference(numeric, 0.3, 0.5, 2.0), 1e-8);
}

TEST(Zeta, Examples) {
  EXPECT_EQ(zeta(exponential(1.0), 1, 1), 0.0);
  EXPECT_NEAR(zeta(exponential(1.0), 0, 1), 1 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(zeta(hyperbolic(1.0), 0, 1), 0.75, 1e-15);
  EXPECT_EQ(log_zeta(hyperbolic(1.0), 1, 1), -INFINITY);
}

TEST(Zeta, NoDiscountingGivesRemainingTime) {
  const AgentParams flat(DiscountModel::generic([](double, double) { return 1.0; }), 2.0);
  EXPECT_NEAR(zeta(flat, 0.25, 1.0), 0.75, 1e-10);
}

TEST(Zeta, LargeHorizonStaysFinite) {
  const double lz = log_zeta(exponential(5.0, 1.5), 0, 400);
  EXPECT_TRUE(std::isfinite(lz));
  // (alpha-1)/k = 0.1, so zeta -> 0.1^0.5 as T grows.
  EXPECT_NEAR(lz, 0.5 * std::log(0.1), 1e-12);
}

TEST(ZetaCheck, Examples) {
  EXPECT_TRUE(check_zeta_nonincreasing(exponential(1.0), 1, 100).nonincreasing);
  EXPECT_TRUE(check_zeta_nonincreasing(hyperbolic(1.0), 5, 100).nonincreasing);
  const AgentParams flat(DiscountModel::generic([](double, double) { return 1.0; }), 2.0);
  EXPECT_TRUE(check_zeta_nonincreasing(flat, 1, 100).nonincreasing);
}

TEST(ZetaCheck, FlagsRisingZeta) {
  // Discount that falls steeply only for delays near 1: gamma_t(T) jumps up as
  // t approaches T - 1 from below, so zeta rises there.
  const AgentParams odd(DiscountModel::generic([](double t, double s) {
                          const double d = s - t;
                          return d > 1.0 ? 1e-3 : 1.0 - 0.999 * d * d * d * d;
                        }),
                        2.0);
  const ZetaVerdict v = check_zeta_nonincreasing(odd, 2.0, 201);
  EXPECT_FALSE(v.nonincreasing);
  ASSERT_TRUE(v.violated_at.has_value());
  EXPECT_GT(*v.violated_at, 0.0);
  EXPECT_LE(*v.violated_at, 2.0);
}

TEST(ZetaCheck, NeedsTwoPoints) {
  EXPECT_ANY_THROW(check_zeta_nonincreasing(exponential(1.0), 1, 1));
}

}  // namespace
}  // namespace pblab

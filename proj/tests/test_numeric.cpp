#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pblab/errors.hpp"
#include "pblab/numeric.hpp"

namespace pblab::numeric {
namespace {

TEST(AdaptiveSimpson, PolynomialsUpToCubicAreExact) {
  const auto r = adaptive_simpson([](double x) { return x * x * x - 2 * x; }, 0, 2);
  EXPECT_NEAR(r.value, 0.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(AdaptiveSimpson, SmoothIntegrand) {
  const double v = integrate([](double x) { return std::exp(x); }, 0, 1, "exp");
  EXPECT_NEAR(v, std::exp(1.0) - 1.0, 1e-10);
}

TEST(AdaptiveSimpson, ReversedIntervalNegates) {
  auto f = [](double x) { return std::sin(x); };
  EXPECT_NEAR(integrate(f, 1, 0, "sin"), -integrate(f, 0, 1, "sin"), 1e-15);
}

TEST(AdaptiveSimpson, EmptyIntervalIsZero) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 3, 3, "const"), 0.0);
}

TEST(AdaptiveSimpson, IntegrableSingularity) {
  // int_0^1 x^{-1/2} = 2; the endpoint itself is never sampled.
  const auto r = adaptive_simpson(
      [](double x) { return x > 0 ? 1 / std::sqrt(x) : 0.0; }, 0, 1);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
}

TEST(AdaptiveSimpson, NonConvergenceThrows) {
  QuadratureOptions tight;
  tight.max_evaluations = 50;
  EXPECT_THROW(integrate([](double x) { return std::sin(1 / (x + 1e-3)); }, 0,
                         1, "oscillatory", tight),
               NumericError);
}

TEST(Bisection, FindsThreshold) {
  const double r = bisect_first_true([](double x) { return x * x >= 2; }, 0, 2,
                                     200, 1e-14);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-13);
  EXPECT_GE(r * r, 2.0);
}

TEST(GoldenSection, InteriorAndEndpointMaxima) {
  const auto in = golden_section_maximize(
      [](double x) { return -(x - 0.3) * (x - 0.3); }, 0, 1, 1e-12);
  EXPECT_NEAR(in.x, 0.3, 1e-6);
  const auto edge = golden_section_maximize([](double x) { return -x; }, 0, 1,
                                            1e-12);
  EXPECT_EQ(edge.x, 0.0);
  EXPECT_EQ(edge.value, 0.0);
}

TEST(LogHelpers, MatchNaiveFormsInRange) {
  for (double x : {1e-8, 0.1, 1.0, 5.0, 30.0}) {
    EXPECT_NEAR(log_expm1(x), std::log(std::expm1(x)), 1e-12 * std::abs(std::log(std::expm1(x))) + 1e-15);
    EXPECT_NEAR(log1mexp(x), std::log(-std::expm1(-x)), 1e-12 * std::abs(std::log(-std::expm1(-x))) + 1e-15);
  }
}

TEST(LogHelpers, NoOverflow) {
  EXPECT_NEAR(log_expm1(2000.0), 2000.0, 1e-12);
  EXPECT_NEAR(log1mexp(2000.0), 0.0, 1e-300);
  EXPECT_NEAR(log1mexp(1e-300), std::log(1e-300), 1e-9);
}

}  // namespace
}  // namespace pblab::numeric

#include <gtest/gtest.h>

#include <cmath>

#include "pblab/errors.hpp"
#include "pblab/intervention.hpp"
#include "pblab/trajectory.hpp"

namespace pblab {
namespace {

const double kLn2 = std::log(2.0);
const double kSqrt3 = std::sqrt(3.0);

AgentParams exponential(double k, double alpha = 2.0) {
  return AgentParams(DiscountModel::exponential(k), alpha);
}
AgentParams hyperbolic(double k, double alpha = 2.0) {
  return AgentParams(DiscountModel::hyperbolic(k), alpha);
}

TEST(OptimalGoal, Examples) {
  const GoalOptResult e = optimal_goal(exponential(kLn2), 2, 1, false);
  EXPECT_NEAR(e.theta_star, std::sqrt(0.75 / kLn2), 1e-15);
  EXPECT_NEAR(e.theta_star, 1.0402, 1e-4);
  EXPECT_EQ(e.branch, GoalBranch::ExpClosed);
  EXPECT_EQ(e.final_progress, e.theta_star);

  const GoalOptResult h = optimal_goal(hyperbolic(1.0), 5, 1, true);
  EXPECT_NEAR(h.theta_star, 5 * std::sqrt(3 * kSqrt3) / 7, 1e-15);
  EXPECT_NEAR(h.theta_star, 1.628219, 1e-6);
  EXPECT_EQ(h.branch, GoalBranch::HypLong);
  EXPECT_TRUE(h.exploitative);
  EXPECT_EQ(h.final_progress, h.theta_star);
}

TEST(OptimalGoal, ZeroReward) {
  EXPECT_EQ(optimal_goal(exponential(1.0), 2, 0, false).theta_star, 0.0);
  EXPECT_EQ(optimal_goal(hyperbolic(1.0), 2, 0, false).theta_star, 0.0);
}

TEST(OptimalGoal, ShortBranchKeepsHorizonFactor) {
  // k = 1, T = 2, R = 1: sqrt(T(kT+2)/(2(kT+1))) = sqrt(4/3).
  const GoalOptResult h = optimal_goal(hyperbolic(1.0), 2, 1, false);
  EXPECT_EQ(h.branch, GoalBranch::HypShort);
  EXPECT_NEAR(h.theta_star, std::sqrt(4.0 / 3.0), 1e-15);
  EXPECT_EQ(h.final_progress, h.theta_star);
}

TEST(OptimalGoal, HyperbolicBranchesMeet) {
  for (double k : {0.3, 1.0, 4.0}) {
    const double edge = (1 + kSqrt3) / k;
    const double lo = closed_form_goal(hyperbolic(k), std::nextafter(edge, 0.0), 2.0);
    const double hi = closed_form_goal(hyperbolic(k), edge, 2.0);
    EXPECT_NEAR(lo, hi, 1e-9 * hi);
  }
}

TEST(OptimalGoal, SlightlyLargerGoalIsAbandoned) {
  for (const AgentParams& p : {exponential(0.9, 2.7), hyperbolic(1.0), hyperbolic(0.2)}) {
    const double theta = closed_form_goal(p, 4, 3);
    const TaskSpec over{4, 3, theta * (1 + 1e-6)};
    EXPECT_LT(progress_at(over, p, 4, abandonment_time(over, p)), theta);
  }
}

TEST(OptimalGoal, UnsupportedFamilies) {
  EXPECT_THROW(optimal_goal(hyperbolic(1.0, 3.0), 2, 1, false), UnsupportedError);
  const AgentParams g(DiscountModel::generic([](double, double) { return 1.0; }), 2.0);
  EXPECT_THROW(closed_form_goal(g, 2, 1), UnsupportedError);
}

TEST(OptimalGoal, RejectsBadTask) {
  EXPECT_THROW(optimal_goal(exponential(1.0), 0, 1, false), ConfigError);
  EXPECT_THROW(optimal_goal(exponential(1.0), 1, -1, false), ConfigError);
}

TEST(OptimalSchedule, SingleStageIsOptimalGoal) {
  for (const AgentParams& p : {exponential(kLn2), hyperbolic(1.0)}) {
    const Schedule s = optimal_schedule(p, 2, 1, 1);
    EXPECT_EQ(s.total, optimal_goal(p, 2, 1, false).theta_star);
  }
}

TEST(OptimalSchedule, Examples) {
  const Schedule e = optimal_schedule(exponential(1.0), 2, 1, 2);
  const double theta_e = std::sqrt((1 - std::exp(-1.0)) * 0.5);
  EXPECT_NEAR(theta_e, 0.56219, 1e-5);
  for (double g : e.goals) EXPECT_NEAR(g, theta_e, 1e-15);
  EXPECT_NEAR(e.total, 2 * theta_e, 1e-15);
  EXPECT_EQ(e.durations, (std::vector<double>{1, 1}));
  EXPECT_EQ(e.rewards, (std::vector<double>{0.5, 0.5}));

  // Stage T=1, R=1/2 on the short branch: sqrt(1*3/(2*2)) sqrt(1/2).
  const Schedule h = optimal_schedule(hyperbolic(1.0), 2, 1, 2);
  const double theta_h = std::sqrt(0.75 * 0.5);
  EXPECT_NEAR(theta_h, 0.61237, 1e-5);
  for (double g : h.goals) EXPECT_NEAR(g, theta_h, 1e-15);
  EXPECT_NEAR(h.total, std::sqrt(1.5), 1e-15);
  EXPECT_NO_THROW(validate(h));
}

TEST(ScheduleValue, Examples) {
  EXPECT_NEAR(schedule_value(exponential(kLn2), 2, 1, 1), 1.0402, 1e-4);
  EXPECT_NEAR(schedule_value(hyperbolic(1.0), 2, 1, 2), 1.22474, 1e-5);
  EXPECT_NEAR(schedule_value(exponential(1.0), 2, 1, 1'000'000), std::sqrt(2.0), 1e-6);
}

TEST(ScheduleValue, MatchesOptimalScheduleTotal) {
  for (const AgentParams& p : {exponential(0.7, 2.5), hyperbolic(1.3)}) {
    for (int n : {1, 2, 5, 13}) {
      const Schedule s = optimal_schedule(p, 3.5, 2.0, n);
      const double f = schedule_value(p, 3.5, 2.0, n);
      EXPECT_NEAR(s.total, f, 1e-9 * f);
      EXPECT_NEAR(evaluate_schedule(p, s), f, 1e-9 * f);
    }
  }
}

TEST(ScheduleValue, StageCountBounds) {
  EXPECT_THROW(schedule_value(exponential(1.0), 2, 1, 0), DomainError);
  EXPECT_THROW(schedule_value(exponential(1.0), 2, 1, 1'000'001), DomainError);
  EXPECT_THROW(optimal_schedule(exponential(1.0), 2, 1, 0), DomainError);
}

TEST(ScheduleLimit, Examples) {
  EXPECT_EQ(schedule_limit(2, 1, 1), 1.0);
  EXPECT_NEAR(schedule_limit(2, 2, 1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(schedule_limit(3, 8, 1), 4.0, 1e-14);
  EXPECT_THROW(schedule_limit(1, 1, 1), ConfigError);
}

TEST(EvaluateSchedule, ZeroGoals) {
  Schedule s{2, {1, 1}, {0.5, 0.5}, {0, 0}, {0, 0}, 0};
  EXPECT_EQ(evaluate_schedule(hyperbolic(1.0), s), 0.0);
}

TEST(EvaluateSchedule, UnreachableStageContributesNothing) {
  const AgentParams p = exponential(kLn2);
  const double good = closed_form_goal(p, 1, 1);
  // Second stage: goal far above what R can justify, so t* = 0.
  Schedule s{2, {1, 1}, {1, 1e-4}, {good, 5.0}, {good, 0}, good};
  EXPECT_NEAR(evaluate_schedule(p, s), good, 1e-15);
}

TEST(EvaluateSchedule, InconsistentScheduleRejected) {
  Schedule s{2, {1}, {0.5, 0.5}, {0, 0}, {0, 0}, 0};
  EXPECT_THROW(evaluate_schedule(hyperbolic(1.0), s), DomainError);
}

}  // namespace
}  // namespace pblab

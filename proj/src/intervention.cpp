#include "pblab/intervention.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "pblab/errors.hpp"
#include "pblab/trajectory.hpp"

namespace pblab {

namespace {

const double kSqrt3 = std::sqrt(3.0);
constexpr long kMaxStages = 1'000'000;

void require_nonnegative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(field, std::string(field) +
                                 " must be a non-negative finite number");
  }
}

void require_supported(const AgentParams& params) {
  if (params.family() == DiscountFamily::Exponential ||
      params.is_hyperbolic_quadratic()) {
    return;
  }
  std::ostringstream msg;
  msg << "no closed-form optimum for the " << to_string(params.family())
      << " family with alpha=" << params.alpha()
      << "; use goal_grid_search instead";
  throw UnsupportedError(msg.str());
}

}  // namespace

std::string_view to_string(GoalBranch branch) {
  switch (branch) {
    case GoalBranch::ExpClosed:
      return "exp-closed";
    case GoalBranch::HypLong:
      return "hyp-long";
    case GoalBranch::HypShort:
      return "hyp-short";
    case GoalBranch::Numeric:
      return "numeric";
  }
  return "unknown";
}

void validate(const Schedule& schedule) {
  const auto n = static_cast<std::size_t>(schedule.stages);
  if (schedule.stages < 1 || schedule.durations.size() != n ||
      schedule.rewards.size() != n || schedule.goals.size() != n ||
      schedule.stage_progress.size() != n) {
    throw DomainError("schedule vectors must all have `stages` entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(schedule.durations[i] >= 0.0) || !(schedule.rewards[i] >= 0.0) ||
        !(schedule.goals[i] >= 0.0) || !(schedule.stage_progress[i] >= 0.0)) {
      throw DomainError("schedule entries must be non-negative");
    }
  }
  const double sum = std::accumulate(schedule.stage_progress.begin(),
                                     schedule.stage_progress.end(), 0.0);
  if (std::abs(sum - schedule.total) > 1e-12 * std::max(1.0, std::abs(sum))) {
    throw DomainError("schedule total differs from the sum of stage progress");
  }
}

double closed_form_goal(const AgentParams& params, double horizon,
                        double reward, GoalBranch* branch) {
  require_supported(params);
  require_nonnegative(horizon, "T");
  require_nonnegative(reward, "R");
  const double alpha = params.alpha();
  const double k = params.k();
  if (params.family() == DiscountFamily::Exponential) {
    if (branch) *branch = GoalBranch::ExpClosed;
    const double scale =
        (alpha - 1.0) / k * -std::expm1(-k * horizon / (alpha - 1.0));
    return std::pow(scale, (alpha - 1.0) / alpha) * std::pow(reward, 1.0 / alpha);
  }
  if (horizon >= (1.0 + kSqrt3) / k) {
    if (branch) *branch = GoalBranch::HypLong;
    return horizon * std::sqrt(3.0 * kSqrt3 * k) / (k * horizon + 2.0) *
           std::sqrt(reward);
  }
  if (branch) *branch = GoalBranch::HypShort;
  return std::sqrt(horizon * (k * horizon + 2.0) / (2.0 * (k * horizon + 1.0))) *
         std::sqrt(reward);
}

GoalOptResult optimal_goal(const AgentParams& params, double horizon,
                           double reward, bool exploitative) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("T", "T must be a positive finite number");
  }
  GoalOptResult out;
  out.exploitative = exploitative;
  out.theta_star = closed_form_goal(params, horizon, reward, &out.branch);
  const TaskSpec task{horizon, reward, out.theta_star};
  out.final_progress =
      progress_at(task, params, horizon, abandonment_time(task, params));
  return out;
}

Schedule optimal_schedule(const AgentParams& params, double horizon,
                          double reward, int stages) {
  if (stages < 1) throw DomainError("optimal_schedule: N must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("T", "T must be a positive finite number");
  }
  const double stage_horizon = horizon / stages;
  const double stage_reward = reward / stages;
  const double goal = closed_form_goal(params, stage_horizon, stage_reward);
  const auto n = static_cast<std::size_t>(stages);
  Schedule out;
  out.stages = stages;
  out.durations.assign(n, stage_horizon);
  out.rewards.assign(n, stage_reward);
  out.goals.assign(n, goal);
  out.stage_progress.assign(n, goal);
  out.total = std::accumulate(out.stage_progress.begin(),
                              out.stage_progress.end(), 0.0);
  return out;
}

double schedule_value(const AgentParams& params, double horizon, double reward,
                      long stages) {
  require_supported(params);
  if (stages < 1 || stages > kMaxStages) {
    throw DomainError("schedule_value: N must lie in [1, 1e6]");
  }
  require_nonnegative(horizon, "T");
  require_nonnegative(reward, "R");
  const double n = static_cast<double>(stages);
  const double alpha = params.alpha();
  const double k = params.k();
  if (params.family() == DiscountFamily::Exponential) {
    const double h =
        n * (alpha - 1.0) / k * -std::expm1(-k * horizon / ((alpha - 1.0) * n));
    return std::pow(h, (alpha - 1.0) / alpha) * std::pow(reward, 1.0 / alpha);
  }
  if (horizon / n >= (1.0 + kSqrt3) / k) {
    return horizon * std::sqrt(3.0 * kSqrt3 * n * k) / (k * horizon + 2.0 * n) *
           std::sqrt(reward);
  }
  return std::sqrt(horizon * (k * horizon + 2.0 * n) /
                   (2.0 * (k * horizon + n))) *
         std::sqrt(reward);
}

double schedule_limit(double alpha, double horizon, double reward) {
  if (!(alpha > 1.0)) throw ConfigError("alpha", "alpha must exceed 1");
  require_nonnegative(horizon, "T");
  require_nonnegative(reward, "R");
  return std::pow(horizon, (alpha - 1.0) / alpha) *
         std::pow(reward, 1.0 / alpha);
}

double evaluate_schedule(const AgentParams& params, const Schedule& schedule) {
  validate(schedule);
  double total = 0.0;
  for (int i = 0; i < schedule.stages; ++i) {
    const TaskSpec stage{schedule.durations[i], schedule.rewards[i],
                         schedule.goals[i]};
    if (stage.horizon <= 0.0 || stage.goal == 0.0) continue;
    total += progress_at(stage, params, stage.horizon,
                         abandonment_time(stage, params));
  }
  return total;
}

}  // namespace pblab

#pragma once

#include <string_view>
#include <vector>

#include "pblab/discount.hpp"

namespace pblab {

/// Which closed form produced a goal. Numeric marks results that came from
/// the grid-search oracle rather than a closed form.
enum class GoalBranch { ExpClosed, HypLong, HypShort, Numeric };

std::string_view to_string(GoalBranch branch);

struct GoalOptResult {
  double theta_star = 0.0;
  /// x(T) realized by the trajectory engine at theta_star.
  double final_progress = 0.0;
  /// Echo of the request; the optimum does not depend on it.
  bool exploitative = false;
  GoalBranch branch = GoalBranch::ExpClosed;
};

/// An N-stage reward schedule. Stage i runs for durations[i] with reward
/// rewards[i] and goal goals[i]; the agent treats each stage independently.
struct Schedule {
  int stages = 0;
  std::vector<double> durations;
  std::vector<double> rewards;
  std::vector<double> goals;
  std::vector<double> stage_progress;
  double total = 0.0;
};

/// Throws DomainError when the vectors disagree with `stages`, an entry is
/// negative, or total != sum(stage_progress).
void validate(const Schedule& schedule);

/// Closed-form optimal goal for horizon T and reward R (T, R >= 0). Exponential
/// family for any alpha; hyperbolic only with alpha == 2. Throws
/// UnsupportedError otherwise.
double closed_form_goal(const AgentParams& params, double horizon,
                        double reward, GoalBranch* branch = nullptr);

/// Optimal goal plus the progress the engine realizes at it.
GoalOptResult optimal_goal(const AgentParams& params, double horizon,
                           double reward, bool exploitative);

/// Equal split into N stages with the per-stage optimal goal.
Schedule optimal_schedule(const AgentParams& params, double horizon,
                          double reward, int stages);

/// Closed-form total progress of the optimal N-stage schedule.
/// N must lie in [1, 1e6]; use schedule_limit for N -> infinity.
double schedule_value(const AgentParams& params, double horizon, double reward,
                      long stages);

/// T^((alpha-1)/alpha) R^(1/alpha): the N -> infinity limit, for any k and
/// either family.
double schedule_limit(double alpha, double horizon, double reward);

/// Runs the trajectory engine on each stage from (0, 0) and sums the realized
/// progress. Stages with zero duration or zero goal contribute nothing.
double evaluate_schedule(const AgentParams& params, const Schedule& schedule);

}  // namespace pblab

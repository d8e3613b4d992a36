#pragma once

#include <optional>
#include <vector>

#include "pblab/discount.hpp"
#include "pblab/intervention.hpp"
#include "pblab/trajectory.hpp"

namespace pblab {

// Brute-force checks that share no formulas with the trajectory engine's
// closed forms: a discrete-time re-planning agent and exhaustive sweeps.

struct OracleConfig {
  /// Time step; defaults to T/2000 when unset.
  std::optional<double> step;
  int theta_grid = 2001;
  int simplex_grid = 101;
  double tol_rel = 1e-9;
  /// Upper end of the goal grid; defaults to 2 T^((alpha-1)/alpha) R^(1/alpha).
  std::optional<double> theta_upper;

  double step_for(double horizon) const;
};

/// Throws ConfigError naming the offending field.
void validate(const OracleConfig& config);

/// Optimal plan of the discretized perceived-cost program at one state.
struct DiscretePlan {
  std::vector<double> increments;
  double perceived_cost = 0.0;
  bool abandon = false;
};

enum class PlanSolver {
  /// Increments proportional to gamma_t(t_m)^(-1/(alpha-1)).
  Proportional,
  /// Bisection on the Lagrange multiplier of the sum constraint.
  LagrangeBisection,
};

/// Minimizes sum_m gamma_t(t_m) (D_m/h)^alpha h - gamma_t(T) R over
/// increments D_m >= 0 summing to theta - x, one per step of the remaining
/// horizon, and compares with doing nothing (cost 0). An exact tie abandons.
DiscretePlan discrete_plan(const AgentState& state, const TaskSpec& task,
                           const AgentParams& params, double step,
                           PlanSolver solver = PlanSolver::Proportional);

/// Re-plans every step from (0, 0) and applies only the first increment.
/// t_star is the first step at which the plan abandons. Requires h <= T/10.
Trajectory simulate_discrete(const TaskSpec& task, const AgentParams& params,
                             double step,
                             PlanSolver solver = PlanSolver::Proportional);

struct GoalSearchResult {
  double theta_hat = 0.0;
  double value = 0.0;
  /// Grid spacing, the resolution of theta_hat.
  double cell = 0.0;
};

/// Evaluates x(T) through the trajectory engine on a uniform goal grid. With
/// exploitative == false, goals the agent does not reach are discarded.
GoalSearchResult goal_grid_search(const AgentParams& params, double horizon,
                                  double reward, const OracleConfig& config,
                                  bool exploitative);

/// Best reward split for fixed stage durations, over a simplex grid of
/// reward fractions, with per-stage closed-form goals.
Schedule best_schedule_for_durations(const AgentParams& params,
                                     const std::vector<double>& durations,
                                     double reward, const OracleConfig& config);

/// Exhaustive sweep over duration and reward simplex grids for N in {2, 3}.
Schedule schedule_sweep(const AgentParams& params, double horizon,
                        double reward, int stages, const OracleConfig& config);

/// Discrete Euler-Lagrange check of the planned path from `state`: samples
/// y* on n nodes, forms z = dL/dv by central differences at interior nodes
/// and returns max |z_{m+1} - z_m| / h. Zero for abandon or finished plans.
double euler_lagrange_residual(const TaskSpec& task, const AgentParams& params,
                               const AgentState& state, int n);

}  // namespace pblab

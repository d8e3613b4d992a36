#pragma once

#include <vector>

#include "pblab/discount.hpp"

namespace pblab {

/// A progress-based task: reward R is paid iff progress reaches the goal
/// theta by the horizon T.
struct TaskSpec {
  double horizon = 1.0;
  double reward = 0.0;
  double goal = 0.0;
};

/// Throws ConfigError naming "T", "R" or "theta" when a field is invalid.
void validate(const TaskSpec& task);

/// Agent state (t, x): time and accumulated progress.
struct AgentState {
  double t = 0.0;
  double x = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
};

/// Realized progress curve. x is non-decreasing and constant after t_star.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double t_star = 0.0;
  bool reached = false;
  double final_progress = 0.0;
};

/// The improper integrals diverge logarithmically as t -> T; values are
/// reported capped here (exp(-700) is treated as 0).
inline constexpr double kProgressCap = 700.0;

/// Relative slack under which the abandonment inequality counts as a tie.
/// Ties keep the agent working so that the goal-setting optimum is attained.
inline constexpr double kTieTolerance = 1e-12;

struct ImproperIntegral {
  double value = 0.0;
  bool divergent = false;
};

/// int_0^t ds / (Gamma_s(T) - Gamma_s(s)), capped at kProgressCap.
double progress_integral(const AgentParams& params, double horizon, double t);

enum class EtaMethod { Auto, Quadrature };

/// eta(t) = int_0^t ds / ((1 + k(T-s))^(alpha/(alpha-1)) - 1) for the
/// hyperbolic family. Auto uses the logarithmic closed form when alpha == 2.
ImproperIntegral eta(const AgentParams& params, double horizon, double t,
                     EtaMethod method = EtaMethod::Auto);

/// log of exp(-alpha * progress_integral(t)) / zeta(t), the quantity compared
/// against R / theta^alpha to decide abandonment. -inf at t == T.
double log_abandonment_lhs(const AgentParams& params, double horizon, double t);

double abandonment_lhs(const AgentParams& params, double horizon, double t);

enum class AbandonmentStrategy {
  Auto,  ///< closed-form branch tests where available, scan otherwise
  Scan,  ///< always scan + bisect (used to cross-check the closed branches)
};

struct AbandonmentOptions {
  AbandonmentStrategy strategy = AbandonmentStrategy::Auto;
  int scan_points = 4096;
  int bisection_iterations = 80;
  /// Grid used to confirm zeta is non-increasing for generic discounts.
  int zeta_check_points = 257;
};

/// The abandonment LHS for a fixed (params, T), reusable across thresholds.
/// Goal sweeps only change R/theta^alpha, so one profile serves a whole grid.
class AbandonmentProfile {
 public:
  AbandonmentProfile(AgentParams params, double horizon,
                     AbandonmentOptions options = {});

  /// Smallest t in [0, T] with LHS(t) >= exp(log_threshold) (ties within
  /// kTieTolerance do not count), or T when there is none.
  double abandonment_time(double log_threshold) const;

  double log_lhs(double t) const;

  const AgentParams& params() const noexcept { return params_; }
  double horizon() const noexcept { return horizon_; }

 private:
  bool uses_scan() const noexcept;
  double log_lhs_from(double t, double pi) const;
  double progress_from_cell(int cell, double t) const;

  AgentParams params_;
  double horizon_;
  AbandonmentOptions options_;
  std::vector<double> grid_;
  std::vector<double> progress_;
  std::vector<double> log_lhs_;
};

/// log(R / theta^alpha); -inf when R == 0.
double log_abandonment_threshold(const TaskSpec& task,
                                 const AgentParams& params);

/// Abandonment time t*. theta == 0 gives T. Throws UnsupportedError when a
/// generic discount makes zeta rise somewhere on [0, T].
double abandonment_time(const TaskSpec& task, const AgentParams& params,
                        const AbandonmentOptions& options = {});

/// Realized progress x(t) given a precomputed abandonment time.
double progress_at(const TaskSpec& task, const AgentParams& params, double t,
                   double t_star);

/// Realized progress x(t) = theta (1 - exp(-progress_integral(min(t, t*)))).
double trajectory_point(const TaskSpec& task, const AgentParams& params,
                        double t);

/// True when the agent at `state` prefers to stop: (theta-x)^alpha >= zeta(t) R.
bool plans_to_abandon(const AgentState& state, const TaskSpec& task,
                      const AgentParams& params);

/// The cost-minimizing plan y*_{t,x}(s) made at `state`, for t <= s <= T.
double planned_path(const AgentState& state, const TaskSpec& task,
                    const AgentParams& params, double s);

/// dy*_{t,x}/ds at s: the planned progress rate.
double planned_rate(const AgentState& state, const TaskSpec& task,
                    const AgentParams& params, double s);

/// n >= 2 uniform samples of x(t) over [0, T].
Trajectory sample_trajectory(const TaskSpec& task, const AgentParams& params,
                             int n);

struct LhsPeak {
  double t_argmax = 0.0;
  double lhs_max = 0.0;
  /// max(0, T - (1+sqrt 3)/k).
  double predicted_argmax = 0.0;
  /// 2(kT+1)/(T(kT+2)) when the peak sits at t = 0, else
  /// (kT+2)^2 / (3 sqrt(3) k T^2).
  double predicted_max = 0.0;
};

/// Maximizes the hyperbolic alpha == 2 abandonment LHS by scan plus
/// golden-section refinement and reports the analytic prediction alongside.
LhsPeak analyze_abandonment_lhs(const AgentParams& params, double horizon);

}  // namespace pblab

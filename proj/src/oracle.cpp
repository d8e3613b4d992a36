#include "pblab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>

#include "pblab/errors.hpp"

namespace pblab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

int step_count(double span, double step) {
  const long m = std::lround(span / step);
  return static_cast<int>(std::max(1L, m));
}

DiscretePlan finalize(std::vector<double> increments, double effort,
                      double discounted_reward) {
  DiscretePlan plan;
  const double cost = effort - discounted_reward;
  if (!std::isfinite(cost)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "discrete plan cost is not finite (effort " << effort
        << ", discounted reward " << discounted_reward << ")";
    throw NumericError(msg.str());
  }
  if (cost >= 0.0) {
    plan.abandon = true;
    plan.increments.assign(increments.size(), 0.0);
    plan.perceived_cost = 0.0;
  } else {
    plan.increments = std::move(increments);
    plan.perceived_cost = cost;
  }
  return plan;
}

std::vector<double> proportional_increments(std::span<const double> log_gamma,
                                            double alpha, double remaining,
                                            double* log_weight_sum) {
  std::vector<double> lw(log_gamma.size());
  for (std::size_t m = 0; m < lw.size(); ++m) {
    lw[m] = -log_gamma[m] / (alpha - 1.0);
  }
  const double lmax = *std::max_element(lw.begin(), lw.end());
  double sum = 0.0;
  for (const double v : lw) sum += std::exp(v - lmax);
  std::vector<double> inc(lw.size());
  for (std::size_t m = 0; m < lw.size(); ++m) {
    inc[m] = remaining * std::exp(lw[m] - lmax) / sum;
  }
  *log_weight_sum = lmax + std::log(sum);
  return inc;
}

std::vector<double> lagrange_increments(std::span<const double> log_gamma,
                                        double alpha, double remaining,
                                        double step) {
  // Stationarity: alpha gamma_m (D_m/h)^(alpha-1) = lambda for every active m.
  auto increments_at = [&](double log_lambda) {
    std::vector<double> inc(log_gamma.size());
    for (std::size_t m = 0; m < inc.size(); ++m) {
      inc[m] = step * std::exp((log_lambda - std::log(alpha) - log_gamma[m]) /
                               (alpha - 1.0));
    }
    return inc;
  };
  auto total_at = [&](double log_lambda) {
    const auto inc = increments_at(log_lambda);
    return std::accumulate(inc.begin(), inc.end(), 0.0);
  };

  const double n = static_cast<double>(log_gamma.size());
  double lo = std::log(alpha) +
              (alpha - 1.0) * std::log(remaining / (step * n));
  double hi = lo;
  double width = alpha - 1.0;
  while (total_at(lo) >= remaining) {
    lo -= width;
    width *= 2.0;
  }
  width = alpha - 1.0;
  while (total_at(hi) < remaining) {
    hi += width;
    width *= 2.0;
  }
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (total_at(mid) < remaining) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return increments_at(hi);
}

bool homogeneous(const AgentParams& params) {
  return params.family() != DiscountFamily::Generic;
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(field, std::string(field) + " must be positive");
  }
}

}  // namespace

double OracleConfig::step_for(double horizon) const {
  return step.value_or(horizon / 2000.0);
}

void validate(const OracleConfig& config) {
  if (config.step) require_positive(*config.step, "h");
  if (config.theta_grid < 2) {
    throw ConfigError("theta_grid", "theta_grid must be >= 2");
  }
  if (config.simplex_grid < 2) {
    throw ConfigError("simplex_grid", "simplex_grid must be >= 2");
  }
  require_positive(config.tol_rel, "tol_rel");
  if (config.theta_upper) require_positive(*config.theta_upper, "theta_upper");
}

DiscretePlan discrete_plan(const AgentState& state, const TaskSpec& task,
                           const AgentParams& params, double step,
                           PlanSolver solver) {
  validate(task);
  require_positive(step, "h");
  if (!(state.t >= 0.0 && state.t < task.horizon)) {
    throw DomainError("discrete_plan: state time must lie in [0, T)");
  }
  const int steps = step_count(task.horizon - state.t, step);
  const double h = (task.horizon - state.t) / steps;
  const double discounted_reward =
      discount_factor(params.discount(), state.t, task.horizon) * task.reward;

  if (state.x >= task.goal) {
    DiscretePlan plan;
    plan.increments.assign(steps, 0.0);
    plan.perceived_cost = -discounted_reward;
    return plan;
  }

  std::vector<double> log_gamma(steps);
  for (int m = 0; m < steps; ++m) {
    log_gamma[m] =
        log_discount_factor(params.discount(), state.t, state.t + m * h);
  }
  const double remaining = task.goal - state.x;
  const double alpha = params.alpha();

  if (solver == PlanSolver::Proportional) {
    double log_w = 0.0;
    auto inc = proportional_increments(log_gamma, alpha, remaining, &log_w);
    // sum gamma_m (D_m/h)^alpha h collapses to D^alpha h^(1-alpha) W^(1-alpha).
    const double effort = std::exp(alpha * std::log(remaining) +
                                   (1.0 - alpha) * (std::log(h) + log_w));
    return finalize(std::move(inc), effort, discounted_reward);
  }

  auto inc = lagrange_increments(log_gamma, alpha, remaining, h);
  double effort = 0.0;
  for (int m = 0; m < steps; ++m) {
    effort += std::exp(log_gamma[m]) * std::pow(inc[m] / h, alpha) * h;
  }
  return finalize(std::move(inc), effort, discounted_reward);
}

Trajectory simulate_discrete(const TaskSpec& task, const AgentParams& params,
                             double step, PlanSolver solver) {
  validate(task);
  require_positive(step, "h");
  if (step > task.horizon / 10.0 * (1.0 + 1e-12)) {
    throw DomainError("simulate_discrete: h must not exceed T/10");
  }
  const int total_steps = step_count(task.horizon, step);
  const double h = task.horizon / total_steps;
  const double alpha = params.alpha();

  Trajectory out;
  out.t_star = task.horizon;
  out.samples.reserve(total_steps + 1);
  out.samples.push_back({0.0, 0.0});

  // Time-homogeneous discounts let every re-plan share one table of
  // log-weights; prefix log-sums give each plan's normalizer in O(1).
  std::vector<double> log_w_prefix;
  if (homogeneous(params) && solver == PlanSolver::Proportional) {
    log_w_prefix.assign(total_steps + 1, kNegInf);
    for (int m = 0; m < total_steps; ++m) {
      const double lw =
          -log_discount_factor(params.discount(), 0.0, m * h) / (alpha - 1.0);
      log_w_prefix[m + 1] = log_add(log_w_prefix[m], lw);
    }
  }

  bool abandoned = false;
  double x = 0.0;
  for (int j = 0; j < total_steps; ++j) {
    const double t = j * h;
    double first = 0.0;
    bool plan_abandons = false;
    if (x < task.goal) {
      if (!log_w_prefix.empty()) {
        const int left = total_steps - j;
        const double remaining = task.goal - x;
        const double log_effort =
            alpha * std::log(remaining) +
            (1.0 - alpha) * (std::log(h) + log_w_prefix[left]);
        const double log_reward =
            task.reward == 0.0
                ? kNegInf
                : log_discount_factor(params.discount(), 0.0, left * h) +
                      std::log(task.reward);
        plan_abandons = log_effort >= log_reward;
        if (!plan_abandons) {
          first = remaining * std::exp(-log_w_prefix[left]);
        }
      } else {
        const DiscretePlan plan =
            discrete_plan({t, x}, task, params, h, solver);
        plan_abandons = plan.abandon;
        first = plan.increments.front();
      }
    }
    if (plan_abandons && !abandoned) {
      abandoned = true;
      out.t_star = t;
    }
    x = std::min(task.goal, x + first);
    out.samples.push_back({j + 1 == total_steps ? task.horizon : (j + 1) * h, x});
  }
  out.final_progress = x;
  out.reached = x >= task.goal * (1.0 - 1e-9);
  return out;
}

GoalSearchResult goal_grid_search(const AgentParams& params, double horizon,
                                  double reward, const OracleConfig& config,
                                  bool exploitative) {
  validate(config);
  validate(TaskSpec{horizon, reward, 0.0});
  const double upper = config.theta_upper.value_or(
      2.0 * schedule_limit(params.alpha(), horizon, reward));
  GoalSearchResult best;
  if (upper <= 0.0) return best;

  const int n = config.theta_grid;
  best.cell = upper / (n - 1);
  const AbandonmentProfile profile(params, horizon);
  for (int i = 1; i < n; ++i) {
    const double goal = upper * i / (n - 1);
    const TaskSpec task{horizon, reward, goal};
    const double t_star =
        profile.abandonment_time(log_abandonment_threshold(task, params));
    const double x = progress_at(task, params, horizon, t_star);
    if (!exploitative && x < goal * (1.0 - config.tol_rel)) continue;
    if (x > best.value) {
      best.theta_hat = goal;
      best.value = x;
    }
  }
  return best;
}

Schedule best_schedule_for_durations(const AgentParams& params,
                                     const std::vector<double>& durations,
                                     double reward, const OracleConfig& config) {
  validate(config);
  const int stages = static_cast<int>(durations.size());
  if (stages < 1 || stages > 3) {
    throw DomainError("schedule sweeps support 1 to 3 stages");
  }
  const int g = config.simplex_grid;
  const int units = g - 1;

  // goal_table[i][b]: optimal goal of stage i given reward fraction b/units.
  std::vector<std::vector<double>> goal_table(stages, std::vector<double>(g));
  for (int i = 0; i < stages; ++i) {
    for (int b = 0; b < g; ++b) {
      goal_table[i][b] =
          closed_form_goal(params, durations[i], reward * b / units);
    }
  }

  std::vector<int> split(stages, 0);
  std::vector<int> best_split;
  double best_total = -1.0;
  std::function<void(int, int)> enumerate = [&](int stage, int left) {
    if (stage == stages - 1) {
      split[stage] = left;
      double total = 0.0;
      for (int i = 0; i < stages; ++i) total += goal_table[i][split[i]];
      if (total > best_total) {
        best_total = total;
        best_split = split;
      }
      return;
    }
    for (int b = 0; b <= left; ++b) {
      split[stage] = b;
      enumerate(stage + 1, left - b);
    }
  };
  enumerate(0, units);

  Schedule out;
  out.stages = stages;
  out.durations = durations;
  for (int i = 0; i < stages; ++i) {
    out.rewards.push_back(reward * best_split[i] / units);
    out.goals.push_back(goal_table[i][best_split[i]]);
  }
  out.stage_progress = out.goals;
  out.total = std::accumulate(out.stage_progress.begin(),
                              out.stage_progress.end(), 0.0);
  return out;
}

Schedule schedule_sweep(const AgentParams& params, double horizon,
                        double reward, int stages, const OracleConfig& config) {
  validate(config);
  validate(TaskSpec{horizon, reward, 0.0});
  if (stages != 2 && stages != 3) {
    throw DomainError("schedule_sweep supports N = 2 or N = 3");
  }
  const int units = config.simplex_grid - 1;
  Schedule best;
  best.total = -1.0;
  std::vector<double> durations(stages);
  auto consider = [&] {
    Schedule s = best_schedule_for_durations(params, durations, reward, config);
    if (s.total > best.total) best = std::move(s);
  };
  for (int a = 0; a <= units; ++a) {
    durations[0] = horizon * a / units;
    if (stages == 2) {
      durations[1] = horizon * (units - a) / units;
      consider();
      continue;
    }
    for (int b = 0; a + b <= units; ++b) {
      durations[1] = horizon * b / units;
      durations[2] = horizon * (units - a - b) / units;
      consider();
    }
  }
  return best;
}

double euler_lagrange_residual(const TaskSpec& task, const AgentParams& params,
                               const AgentState& state, int n) {
  validate(task);
  if (n < 4) throw DomainError("euler_lagrange_residual: n must be >= 4");
  if (state.x >= task.goal || plans_to_abandon(state, task, params)) {
    return 0.0;
  }
  const double h = (task.horizon - state.t) / (n - 1);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    const double s = i == n - 1 ? task.horizon : state.t + i * h;
    y[i] = planned_path(state, task, params, s);
  }
  const double alpha = params.alpha();
  std::vector<double> z(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double v = (y[i + 1] - y[i - 1]) / (2.0 * h);
    const double s = state.t + i * h;
    z[i] = alpha * discount_factor(params.discount(), state.t, s) *
           std::pow(v, alpha - 1.0);
  }
  // L carries no explicit y dependence, so z' must vanish.
  double residual = 0.0;
  for (int i = 1; i < n - 2; ++i) {
    residual = std::max(residual, std::abs(z[i + 1] - z[i]) / h);
  }
  return residual;
}

}  // namespace pblab

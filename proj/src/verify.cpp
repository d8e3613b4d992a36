#include "pblab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "pblab/errors.hpp"
#include "pblab/intervention.hpp"
#include "pblab/trajectory.hpp"

namespace pblab {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kLn2 = std::log(2.0);

/// Additive-recurrence low-discrepancy sequence; one irrational per axis.
class Kronecker {
 public:
  explicit Kronecker(int dims) {
    static constexpr double kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    for (int d = 0; d < dims; ++d) {
      const double r = std::sqrt(kPrimes[d]);
      steps_.push_back(r - std::floor(r));
    }
  }

  /// Point i in (0, 1]^dims.
  std::vector<double> point(int i) const {
    std::vector<double> u;
    for (const double a : steps_) {
      const double v = 0.5 + (i + 1) * a;
      u.push_back(1.0 - (v - std::floor(v)));
    }
    return u;
  }

 private:
  std::vector<double> steps_;
};

/// Maps u in (0, 1] onto (lo, hi].
double span(double u, double lo, double hi) { return lo + (hi - lo) * u; }

class Recorder {
 public:
  explicit Recorder(VerificationReport& report) : report_(report) {}

  void near(int criterion, std::string name, double expected, double actual,
            double tolerance, std::string note = {}) {
    const bool ok = std::isfinite(actual) &&
                    std::abs(actual - expected) <= tolerance;
    push(criterion, std::move(name), expected, actual, tolerance, ok,
         std::move(note));
  }

  void truth(int criterion, std::string name, bool ok, std::string note = {}) {
    push(criterion, std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, ok,
         std::move(note));
  }

  /// Passes when actual <= bound.
  void at_most(int criterion, std::string name, double bound, double actual,
               std::string note = {}) {
    push(criterion, std::move(name), bound, actual, 0.0,
         std::isfinite(actual) && actual <= bound, std::move(note));
  }

  /// Passes when lo <= actual <= hi; expected is the midpoint.
  void within(int criterion, std::string name, double lo, double hi,
              double actual, std::string note = {}) {
    push(criterion, std::move(name), 0.5 * (lo + hi), actual, 0.5 * (hi - lo),
         actual >= lo && actual <= hi, std::move(note));
  }

 private:
  void push(int criterion, std::string name, double expected, double actual,
            double tolerance, bool ok, std::string note) {
    report_.checks.push_back(Check{criterion, std::move(name), expected, actual,
                                   tolerance, ok, std::move(note)});
  }

  VerificationReport& report_;
};

double sample_at(const Trajectory& traj, double t) {
  // Samples are uniform in time; pick the node nearest t.
  const double horizon = traj.samples.back().t;
  const auto n = traj.samples.size() - 1;
  const auto idx = static_cast<std::size_t>(std::lround(t / horizon * n));
  return traj.samples.at(idx).x;
}

void closed_form_vs_oracle(Recorder& rec) {
  // Exponential, alpha = 2, k = ln 2, T = 2, theta = 1, R = 2.
  const AgentParams params(DiscountModel::exponential(kLn2), 2.0);
  const TaskSpec task{2.0, 2.0, 1.0};
  rec.near(1, "engine t*", 2.0, abandonment_time(task, params), 0.0);
  rec.near(1, "engine x(1)", 1.0 / 3.0, trajectory_point(task, params, 1.0),
           1e-15);
  rec.near(1, "engine x(2)", 1.0, trajectory_point(task, params, 2.0), 0.0);

  const Trajectory coarse = simulate_discrete(task, params, 1e-3);
  const double x1_coarse = sample_at(coarse, 1.0);
  rec.near(1, "oracle h=1e-3 x(1) rel err", 0.0,
           std::abs(x1_coarse - 1.0 / 3.0) * 3.0, 0.01);
  rec.near(1, "oracle h=1e-3 x(2) rel err", 0.0,
           std::abs(coarse.final_progress - 1.0), 0.01);
  // On this instance the oracle is exact at grid nodes, so the step-size rate
  // is measured on the planned perceived cost at t=0, a left Riemann sum.
  const double continuous_cost =
      std::pow(task.goal, params.alpha()) *
          std::pow(gamma_difference(params, 0.0, 0.0, task.horizon),
                   1.0 - params.alpha()) -
      discount_factor(params.discount(), 0.0, task.horizon) * task.reward;
  const AgentState origin{0.0, 0.0};
  const double err_coarse = std::abs(
      discrete_plan(origin, task, params, 1e-3).perceived_cost - continuous_cost);
  const double err_fine = std::abs(
      discrete_plan(origin, task, params, 5e-4).perceived_cost - continuous_cost);
  rec.near(1, "oracle h=1e-3 perceived cost rel err", 0.0,
           err_coarse / std::abs(continuous_cost), 0.01);
  rec.within(1, "perceived cost error ratio h/(h/2)", 1.5, 2.5,
             err_coarse / err_fine,
             "first-order convergence: halving h halves the error");
}

void hyperbolic_closed_form(Recorder& rec) {
  const AgentParams params(DiscountModel::hyperbolic(1.0), 2.0);
  const TaskSpec task{2.0, 2.0, 1.0};
  rec.near(2, "engine t*", 2.0, abandonment_time(task, params), 0.0);
  rec.near(2, "engine x(1)", 1.0 / 3.0, trajectory_point(task, params, 1.0),
           1e-15);
  rec.near(2, "engine x(2)", 1.0, trajectory_point(task, params, 2.0), 0.0);
  const Trajectory oracle = simulate_discrete(task, params, 1e-3);
  rec.near(2, "oracle h=1e-3 x(1) rel err", 0.0,
           std::abs(sample_at(oracle, 1.0) - 1.0 / 3.0) * 3.0, 0.01);
  rec.near(2, "oracle h=1e-3 x(2) rel err", 0.0,
           std::abs(oracle.final_progress - 1.0), 0.01);
}

void exponential_binary_abandonment(Recorder& rec) {
  const Kronecker seq(4);
  int binary = 0;
  int agree = 0;
  int zero = 0;
  constexpr int kInstances = 100;
  AbandonmentOptions scan;
  scan.strategy = AbandonmentStrategy::Scan;
  for (int i = 0; i < kInstances; ++i) {
    const auto u = seq.point(i);
    const double alpha = span(u[0], 1.0, 4.0);
    const double k = span(u[1], 0.0, 4.0);
    const double horizon = span(u[2], 0.0, 10.0);
    const double ratio = span(u[3], 0.0, 10.0);
    const AgentParams params(DiscountModel::exponential(k), alpha);
    const TaskSpec task{horizon, ratio, 1.0};
    const double scanned = abandonment_time(task, params, scan);
    const double closed = abandonment_time(task, params);
    if (scanned == 0.0 || scanned == horizon) ++binary;
    if (scanned == closed) ++agree;
    if (scanned == 0.0) ++zero;
  }
  std::ostringstream note;
  note << zero << " never start, " << kInstances - zero << " finish";
  rec.near(3, "scanned t* in {0, T}", kInstances, binary, 0.0, note.str());
  rec.near(3, "scan agrees with closed branch test", kInstances, agree, 0.0);
}

void time_inconsistency(Recorder& rec, const OracleConfig& config) {
  const double k = 1.0;
  const double horizon = 5.0;
  const AgentParams params(DiscountModel::hyperbolic(k), 2.0);
  const double t_peak = horizon - (1.0 + kSqrt3) / k;
  const double lhs0 = abandonment_lhs(params, horizon, 0.0);
  const double lhs_peak = abandonment_lhs(params, horizon, t_peak);
  const TaskSpec task{horizon, 0.5 * (lhs0 + lhs_peak), 1.0};

  const double t_star = abandonment_time(task, params);
  rec.truth(4, "engine t* strictly inside (0, T)",
            t_star > 0.0 && t_star < horizon,
            "t* = " + std::to_string(t_star));
  AbandonmentOptions scan;
  scan.strategy = AbandonmentStrategy::Scan;
  rec.near(4, "scan t* matches unimodal bisection", t_star,
           abandonment_time(task, params, scan), 1e-9 * horizon);

  const Trajectory oracle =
      simulate_discrete(task, params, config.step_for(horizon));
  const double x_at_stop = sample_at(oracle, oracle.t_star);
  rec.truth(4, "oracle rises before t*",
            oracle.t_star > 0.0 && x_at_stop > 0.0);
  rec.near(4, "oracle flat after t*", x_at_stop, oracle.final_progress, 0.0);
  rec.near(4, "oracle t* rel err", 0.0,
           std::abs(oracle.t_star - t_star) / t_star, 0.02);
}

void peak_location(Recorder& rec) {
  const AgentParams params(DiscountModel::hyperbolic(1.0), 2.0);
  const LhsPeak longer = analyze_abandonment_lhs(params, 5.0);
  rec.near(5, "argmax, k=1 T=5", 5.0 - (1.0 + kSqrt3), longer.t_argmax, 1e-6);
  rec.near(5, "max, k=1 T=5", 49.0 / (75.0 * kSqrt3), longer.lhs_max, 1e-9);

  const LhsPeak shorter = analyze_abandonment_lhs(params, 2.0);
  rec.near(5, "argmax, k=1 T=2", 0.0, shorter.t_argmax, 1e-6);
  rec.near(5, "max, k=1 T=2 (direct LHS(0))", 0.75, shorter.lhs_max, 1e-12,
           "2(kT+1)/(kT+2) = 1.5 disagrees with direct evaluation; "
           "2(kT+1)/(T(kT+2)) = 0.75 is used");
}

void goal_setting(Recorder& rec, const OracleConfig& config) {
  const Kronecker seq(4);
  for (const DiscountFamily family :
       {DiscountFamily::Exponential, DiscountFamily::Hyperbolic}) {
    double worst_cell = 0.0;
    double worst_progress = 0.0;
    int identical = 0;
    std::set<GoalBranch> branches;
    constexpr int kInstances = 20;
    for (int i = 0; i < kInstances; ++i) {
      const auto u = seq.point(i);
      const double k = span(u[0], 0.2, 4.0);
      const double horizon = span(u[1], 0.2, 10.0);
      const double reward = span(u[2], 0.1, 10.0);
      const double alpha =
          family == DiscountFamily::Exponential ? span(u[3], 1.0, 4.0) : 2.0;
      const AgentParams params(family == DiscountFamily::Exponential
                                   ? DiscountModel::exponential(k)
                                   : DiscountModel::hyperbolic(k),
                               alpha);
      const GoalOptResult closed = optimal_goal(params, horizon, reward, false);
      branches.insert(closed.branch);
      const GoalSearchResult loose =
          goal_grid_search(params, horizon, reward, config, true);
      const GoalSearchResult strict =
          goal_grid_search(params, horizon, reward, config, false);
      worst_cell = std::max(
          {worst_cell, std::abs(loose.theta_hat - closed.theta_star) / loose.cell,
           std::abs(strict.theta_hat - closed.theta_star) / strict.cell});
      if (loose.theta_hat == strict.theta_hat && loose.value == strict.value) {
        ++identical;
      }
      worst_progress =
          std::max(worst_progress, std::abs(closed.final_progress -
                                            closed.theta_star) /
                                       std::max(1.0, closed.theta_star));
    }
    const std::string tag(to_string(family));
    std::ostringstream note;
    note << branches.size() << " closed-form branch(es) exercised";
    rec.at_most(6, tag + ": |grid - closed| in cells", 1.0, worst_cell,
                note.str());
    rec.near(6, tag + ": exploitative == non-exploitative", kInstances,
             identical, 0.0);
    rec.at_most(6, tag + ": |x(T) - theta*|", 1e-9, worst_progress);
  }
}

void scheduling(Recorder& rec, const OracleConfig& config) {
  const Kronecker seq(3);
  for (const DiscountFamily family :
       {DiscountFamily::Exponential, DiscountFamily::Hyperbolic}) {
    double worst_t = 0.0;
    double worst_r = 0.0;
    int forced_lower = 0;
    constexpr int kInstances = 5;
    for (int i = 0; i < kInstances; ++i) {
      const auto u = seq.point(i + 7);
      const double k = span(u[0], 0.2, 4.0);
      const double horizon = span(u[1], 0.5, 10.0);
      const double reward = span(u[2], 0.1, 10.0);
      const AgentParams params(family == DiscountFamily::Exponential
                                   ? DiscountModel::exponential(k)
                                   : DiscountModel::hyperbolic(k),
                               2.0);
      const Schedule best = schedule_sweep(params, horizon, reward, 2, config);
      const double t_cell = horizon / (config.simplex_grid - 1);
      const double r_cell = reward / (config.simplex_grid - 1);
      worst_t = std::max(worst_t,
                         std::abs(best.durations[0] - horizon / 2) / t_cell);
      worst_r = std::max(worst_r,
                         std::abs(best.rewards[0] - reward / 2) / r_cell);
      const Schedule forced = best_schedule_for_durations(
          params, {0.9 * horizon, 0.1 * horizon}, reward, config);
      if (forced.total < schedule_value(params, horizon, reward, 2)) {
        ++forced_lower;
      }
    }
    const std::string tag(to_string(family));
    rec.at_most(7, tag + ": |T_1 - T/2| in cells", 1.0, worst_t);
    rec.at_most(7, tag + ": |R_1 - R/2| in cells", 1.0, worst_r);
    rec.near(7, tag + ": 90/10 split strictly worse", kInstances, forced_lower,
             0.0);
  }
}

void monotone_limits(Recorder& rec) {
  const Kronecker seq(3);
  for (const DiscountFamily family :
       {DiscountFamily::Exponential, DiscountFamily::Hyperbolic}) {
    const std::string tag(to_string(family));
    auto model = [&](double k) {
      return family == DiscountFamily::Exponential ? DiscountModel::exponential(k)
                                                   : DiscountModel::hyperbolic(k);
    };
    int monotone = 0;
    int bounded = 0;
    constexpr int kInstances = 10;
    for (int i = 0; i < kInstances; ++i) {
      const auto u = seq.point(i + 31);
      const double k = span(u[0], 0.2, 4.0);
      const double horizon = span(u[1], 0.2, 10.0);
      const double reward = span(u[2], 0.1, 10.0);
      const AgentParams params(model(k), 2.0);
      const double limit = schedule_limit(2.0, horizon, reward);
      bool up = true;
      bool below = true;
      double prev = schedule_value(params, horizon, reward, 1);
      below = below && prev < limit;
      for (long n = 2; n <= 64; ++n) {
        const double f = schedule_value(params, horizon, reward, n);
        up = up && f > prev;
        below = below && f < limit;
        prev = f;
      }
      monotone += up;
      bounded += below;
    }
    rec.near(8, tag + ": f strictly increasing on N=1..64", kInstances,
             monotone, 0.0);
    rec.near(8, tag + ": f(N) < limit on N=1..64", kInstances, bounded, 0.0);

    const AgentParams unit(model(1.0), 2.0);
    const double limit = schedule_limit(2.0, 2.0, 1.0);
    const double f4 = schedule_value(unit, 2.0, 1.0, 10'000);
    rec.truth(8, tag + ": f(1e4) < limit", f4 < limit);
    rec.at_most(8, tag + ": rel gap f(1e4) to limit", 1e-3,
                (limit - f4) / limit);
  }
  const double f_exp = schedule_value(
      AgentParams(DiscountModel::exponential(1.0), 2.0), 2.0, 1.0, 1'000'000);
  const double f_hyp = schedule_value(
      AgentParams(DiscountModel::hyperbolic(1.0), 2.0), 2.0, 1.0, 1'000'000);
  rec.near(8, "f_exp(1e6) vs f_hyp(1e6)", f_exp, f_hyp, 1e-5,
           "both approach sqrt(T R) = sqrt(2)");
}

void eta_consistency(Recorder& rec) {
  const Kronecker seq(3);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto u = seq.point(i + 101);
    const double k = span(u[0], 0.1, 4.0);
    const double horizon = span(u[1], 0.1, 10.0);
    const double t = horizon * 0.999 * (1.0 - u[2]);
    const AgentParams params(DiscountModel::hyperbolic(k), 2.0);
    const double closed = eta(params, horizon, t).value;
    const double quad = eta(params, horizon, t, EtaMethod::Quadrature).value;
    worst = std::max(worst, std::abs(closed - quad) / std::max(1.0, closed));
  }
  rec.at_most(9, "max |eta_quad - eta_closed| over 50 samples", 1e-8, worst);
}

void euler_lagrange(Recorder& rec) {
  const AgentParams exp_params(DiscountModel::exponential(kLn2), 2.0);
  const AgentParams hyp_params(DiscountModel::hyperbolic(1.0), 2.0);
  const TaskSpec task{2.0, 2.0, 1.0};
  const AgentState origin{0.0, 0.0};
  for (const auto& [tag, params] :
       {std::pair{"exponential", exp_params}, std::pair{"hyperbolic", hyp_params}}) {
    rec.at_most(10, std::string(tag) + ": residual at n=100", 1e-6,
                euler_lagrange_residual(task, params, origin, 100));
    rec.at_most(10, std::string(tag) + ": residual at n=1000", 1e-6,
                euler_lagrange_residual(task, params, origin, 1000));
  }
  // With alpha = 2 both instances are exact under central differences, so the
  // convergence rate is measured where the truncation error is non-zero.
  const AgentParams cubic(DiscountModel::hyperbolic(1.0), 3.0);
  const TaskSpec rich{2.0, 10.0, 1.0};
  const double r100 = euler_lagrange_residual(rich, cubic, origin, 100);
  const double r200 = euler_lagrange_residual(rich, cubic, origin, 200);
  const double r400 = euler_lagrange_residual(rich, cubic, origin, 400);
  rec.at_most(10, "hyperbolic alpha=3: residual at n=100", 1e-2, r100);
  rec.truth(10, "hyperbolic alpha=3: residual(n)/residual(2n) >= 1.8",
            r100 / r200 >= 1.8 && r200 / r400 >= 1.8,
            "ratios " + std::to_string(r100 / r200) + ", " +
                std::to_string(r200 / r400));
}

}  // namespace

bool VerificationReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

bool VerificationReport::criterion_passed(int criterion) const {
  bool any = false;
  for (const Check& c : checks) {
    if (c.criterion != criterion) continue;
    any = true;
    if (!c.passed) return false;
  }
  return any;
}

std::vector<int> VerificationReport::criteria() const {
  std::set<int> ids;
  for (const Check& c : checks) ids.insert(c.criterion);
  return {ids.begin(), ids.end()};
}

std::string criterion_title(int criterion) {
  static const std::map<int, std::string> kTitles = {
      {1, "exponential closed form vs discrete oracle"},
      {2, "hyperbolic alpha=2 closed form vs discrete oracle"},
      {3, "exponential agents never abandon mid-task"},
      {4, "hyperbolic mid-task abandonment"},
      {5, "abandonment LHS peak location and value"},
      {6, "goal-setting optimum vs grid search"},
      {7, "equal split optimal for N=2 schedules"},
      {8, "schedule value monotone in N with common limit"},
      {9, "eta quadrature vs closed form"},
      {10, "Euler-Lagrange first integral"},
      {11, "CLI determinism"},
  };
  const auto it = kTitles.find(criterion);
  return it == kTitles.end() ? "criterion " + std::to_string(criterion)
                             : it->second;
}

VerificationReport run_verification(const OracleConfig& config) {
  validate(config);
  VerificationReport report;
  Recorder rec(report);
  closed_form_vs_oracle(rec);
  hyperbolic_closed_form(rec);
  exponential_binary_abandonment(rec);
  time_inconsistency(rec, config);
  peak_location(rec);
  goal_setting(rec, config);
  scheduling(rec, config);
  monotone_limits(rec);
  eta_consistency(rec);
  euler_lagrange(rec);
  return report;
}

}  // namespace pblab

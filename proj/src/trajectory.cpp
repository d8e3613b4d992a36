#include "pblab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pblab/errors.hpp"
#include "pblab/numeric.hpp"

namespace pblab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kSqrt3 = std::sqrt(3.0);

// Beyond this point the progress integral is treated as divergent.
double singular_edge(double horizon) { return horizon * (1.0 - 1e-12); }

void require_time(double t, double lo, double hi, const char* what) {
  if (!(t >= lo && t <= hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": t=" << t << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
}

bool closed_form_progress(const AgentParams& params) {
  return params.family() == DiscountFamily::Exponential ||
         params.is_hyperbolic_quadratic();
}

double eta_closed_quadratic(double k, double horizon, double t) {
  const double u = horizon - t;
  return (std::log(k * horizon / (k * horizon + 2.0)) -
          std::log(k * u / (k * u + 2.0))) /
         (2.0 * k);
}

double eta_integrand(const AgentParams& params, double horizon, double s) {
  const double p = params.alpha() / (params.alpha() - 1.0);
  return 1.0 / std::expm1(p * std::log1p(params.k() * (horizon - s)));
}

// int_a^b ds / (Gamma_s(T) - Gamma_s(s)) by quadrature, for b < T.
double progress_segment(const AgentParams& params, double horizon, double a,
                        double b) {
  if (b <= a) return 0.0;
  switch (params.family()) {
    case DiscountFamily::Hyperbolic: {
      const double alpha = params.alpha();
      const double coeff = params.k() * alpha / (alpha - 1.0);
      return coeff * numeric::integrate(
                         [&](double s) {
                           return eta_integrand(params, horizon, s);
                         },
                         a, b, "eta integrand");
    }
    case DiscountFamily::Generic:
      return numeric::integrate(
          [&](double s) {
            return 1.0 / gamma_difference(params, s, s, horizon);
          },
          a, b, "1/(Gamma_s(T) - Gamma_s(s))");
    case DiscountFamily::Exponential:
      break;
  }
  // Closed forms exist for the exponential family; take the difference.
  return progress_integral(params, horizon, b) -
         progress_integral(params, horizon, a);
}

double progress_closed(const AgentParams& params, double horizon, double t) {
  const double k = params.k();
  if (params.family() == DiscountFamily::Exponential) {
    const double a = k / (params.alpha() - 1.0);
    // log((e^{aT} - 1) / (e^{aT} - e^{at})), kept in log space.
    return numeric::log1mexp(a * horizon) -
           numeric::log1mexp(a * (horizon - t));
  }
  return 2.0 * k * eta_closed_quadratic(k, horizon, t);
}

bool abandons(double log_lhs, double log_threshold) {
  return log_lhs > log_threshold + kTieTolerance;
}

// (Gamma_t(s) - Gamma_t(t)) / (Gamma_t(T) - Gamma_t(t)) in [0, 1].
double gamma_fraction(const AgentParams& params, double t, double s,
                      double horizon) {
  if (s <= t) return 0.0;
  if (s >= horizon) return 1.0;
  const double alpha = params.alpha();
  const double k = params.k();
  switch (params.family()) {
    case DiscountFamily::Exponential: {
      const double a = k / (alpha - 1.0);
      return std::exp(numeric::log_expm1(a * (s - t)) -
                      numeric::log_expm1(a * (horizon - t)));
    }
    case DiscountFamily::Hyperbolic: {
      const double p = alpha / (alpha - 1.0);
      return std::exp(numeric::log_expm1(p * std::log1p(k * (s - t))) -
                      numeric::log_expm1(p * std::log1p(k * (horizon - t))));
    }
    case DiscountFamily::Generic:
      return gamma_difference(params, t, t, s) /
             gamma_difference(params, t, t, horizon);
  }
  return 0.0;
}

}  // namespace

void validate(const TaskSpec& task) {
  if (!(task.horizon > 0.0) || !std::isfinite(task.horizon)) {
    throw ConfigError("T", "T must be a positive finite number");
  }
  if (!(task.reward >= 0.0) || !std::isfinite(task.reward)) {
    throw ConfigError("R", "R must be a non-negative finite number");
  }
  if (!(task.goal >= 0.0) || !std::isfinite(task.goal)) {
    throw ConfigError("theta", "theta must be a non-negative finite number");
  }
}

double progress_integral(const AgentParams& params, double horizon, double t) {
  require_time(t, 0.0, horizon, "progress_integral");
  if (t == 0.0) return 0.0;
  if (t >= singular_edge(horizon)) return kProgressCap;
  const double value = closed_form_progress(params)
                           ? progress_closed(params, horizon, t)
                           : progress_segment(params, horizon, 0.0, t);
  return std::min(value, kProgressCap);
}

ImproperIntegral eta(const AgentParams& params, double horizon, double t,
                     EtaMethod method) {
  if (params.family() != DiscountFamily::Hyperbolic) {
    throw DomainError("eta is defined for the hyperbolic family only");
  }
  require_time(t, 0.0, horizon, "eta");
  if (t == 0.0) return {0.0, false};
  if (t >= singular_edge(horizon)) return {kProgressCap, true};
  double value;
  if (method == EtaMethod::Auto && params.alpha() == 2.0) {
    value = eta_closed_quadratic(params.k(), horizon, t);
  } else {
    value = numeric::integrate(
        [&](double s) { return eta_integrand(params, horizon, s); }, 0.0, t,
        "eta integrand");
  }
  if (value >= kProgressCap) return {kProgressCap, true};
  return {value, false};
}

double log_abandonment_lhs(const AgentParams& params, double horizon,
                           double t) {
  require_time(t, 0.0, horizon, "log_abandonment_lhs");
  if (t >= singular_edge(horizon)) return kNegInf;
  if (params.is_hyperbolic_quadratic()) {
    // 2(kT+2)^2/T^2 * u(ku+1)/(ku+2)^3 with u = T - t.
    const double k = params.k();
    const double u = horizon - t;
    return std::log(2.0) + 2.0 * std::log(k * horizon + 2.0) -
           2.0 * std::log(horizon) + std::log(u) + std::log1p(k * u) -
           3.0 * std::log(k * u + 2.0);
  }
  return -params.alpha() * progress_integral(params, horizon, t) -
         log_zeta(params, t, horizon);
}

double abandonment_lhs(const AgentParams& params, double horizon, double t) {
  return std::exp(log_abandonment_lhs(params, horizon, t));
}

AbandonmentProfile::AbandonmentProfile(AgentParams params, double horizon,
                                       AbandonmentOptions options)
    : params_(std::move(params)), horizon_(horizon), options_(options) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("T", "T must be a positive finite number");
  }
  if (options_.scan_points < 2) {
    throw ConfigError("scan_points", "scan_points must be >= 2");
  }
  if (params_.family() == DiscountFamily::Generic) {
    const ZetaVerdict verdict = check_zeta_nonincreasing(
        params_, horizon_, std::max(2, options_.zeta_check_points));
    if (!verdict.nonincreasing) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "zeta rises at t=" << *verdict.violated_at
          << "; the abandon/resume regime is not supported";
      throw UnsupportedError(msg.str());
    }
  }
  if (!uses_scan()) return;

  const int n = options_.scan_points;
  grid_.resize(n + 1);
  progress_.resize(n + 1);
  log_lhs_.resize(n + 1);
  const bool closed = closed_form_progress(params_);
  for (int j = 0; j <= n; ++j) {
    grid_[j] = j == n ? horizon_ : horizon_ * j / n;
  }
  progress_[0] = 0.0;
  for (int j = 1; j < n; ++j) {
    progress_[j] = closed ? progress_integral(params_, horizon_, grid_[j])
                          : progress_[j - 1] + progress_segment(params_, horizon_,
                                                                grid_[j - 1],
                                                                grid_[j]);
  }
  progress_[n] = kProgressCap;
  for (int j = 0; j <= n; ++j) {
    log_lhs_[j] = log_lhs_from(grid_[j], progress_[j]);
  }
}

bool AbandonmentProfile::uses_scan() const noexcept {
  if (options_.strategy == AbandonmentStrategy::Scan) return true;
  return !(params_.family() == DiscountFamily::Exponential ||
           params_.is_hyperbolic_quadratic());
}

double AbandonmentProfile::log_lhs_from(double t, double pi) const {
  if (t >= singular_edge(horizon_)) return kNegInf;
  if (params_.is_hyperbolic_quadratic()) {
    return log_abandonment_lhs(params_, horizon_, t);
  }
  return -params_.alpha() * std::min(pi, kProgressCap) -
         log_zeta(params_, t, horizon_);
}

double AbandonmentProfile::progress_from_cell(int cell, double t) const {
  if (t >= singular_edge(horizon_)) return kProgressCap;
  if (closed_form_progress(params_)) {
    return progress_integral(params_, horizon_, t);
  }
  return progress_[cell] +
         progress_segment(params_, horizon_, grid_[cell], t);
}

double AbandonmentProfile::log_lhs(double t) const {
  require_time(t, 0.0, horizon_, "AbandonmentProfile::log_lhs");
  if (grid_.empty()) return log_abandonment_lhs(params_, horizon_, t);
  const int n = options_.scan_points;
  const int cell = std::clamp(static_cast<int>(t / horizon_ * n), 0, n - 1);
  return log_lhs_from(t, progress_from_cell(cell, t));
}

double AbandonmentProfile::abandonment_time(double log_threshold) const {
  const double tol = 1e-10 * horizon_;
  const int iters = options_.bisection_iterations;

  if (!uses_scan()) {
    const double lhs0 = log_abandonment_lhs(params_, horizon_, 0.0);
    if (abandons(lhs0, log_threshold)) return 0.0;
    if (params_.family() == DiscountFamily::Exponential) {
      // LHS decreases in t, so the agent either never starts or finishes.
      return horizon_;
    }
    // Hyperbolic, alpha == 2: LHS rises to a single peak and then falls.
    const double t_peak = horizon_ - (1.0 + kSqrt3) / params_.k();
    if (t_peak <= 0.0) return horizon_;
    if (!abandons(log_abandonment_lhs(params_, horizon_, t_peak),
                  log_threshold)) {
      return horizon_;
    }
    return numeric::bisect_first_true(
        [&](double t) {
          return abandons(log_abandonment_lhs(params_, horizon_, t),
                          log_threshold);
        },
        0.0, t_peak, iters, tol);
  }

  const int n = options_.scan_points;
  for (int j = 0; j <= n; ++j) {
    if (!abandons(log_lhs_[j], log_threshold)) continue;
    if (j == 0) return 0.0;
    const int cell = j - 1;
    return numeric::bisect_first_true(
        [&](double t) {
          return abandons(log_lhs_from(t, progress_from_cell(cell, t)),
                          log_threshold);
        },
        grid_[cell], grid_[j], iters, tol);
  }
  return horizon_;
}

double log_abandonment_threshold(const TaskSpec& task,
                                 const AgentParams& params) {
  if (task.reward == 0.0) return kNegInf;
  return std::log(task.reward) - params.alpha() * std::log(task.goal);
}

double abandonment_time(const TaskSpec& task, const AgentParams& params,
                        const AbandonmentOptions& options) {
  validate(task);
  if (task.goal == 0.0) return task.horizon;
  const AbandonmentProfile profile(params, task.horizon, options);
  return profile.abandonment_time(log_abandonment_threshold(task, params));
}

double progress_at(const TaskSpec& task, const AgentParams& params, double t,
                   double t_star) {
  require_time(t, 0.0, task.horizon, "progress_at");
  if (task.goal == 0.0) return 0.0;
  const double horizon = task.horizon;
  const double tt = std::min(t, t_star);
  if (tt <= 0.0) return 0.0;
  if (tt >= horizon) return task.goal;
  const double k = params.k();
  if (params.family() == DiscountFamily::Exponential) {
    const double a = k / (params.alpha() - 1.0);
    return task.goal * std::exp(numeric::log_expm1(a * tt) -
                                numeric::log_expm1(a * horizon));
  }
  if (params.is_hyperbolic_quadratic()) {
    return 2.0 * task.goal * tt / ((k * (horizon - tt) + 2.0) * horizon);
  }
  return -task.goal * std::expm1(-progress_integral(params, horizon, tt));
}

double trajectory_point(const TaskSpec& task, const AgentParams& params,
                        double t) {
  validate(task);
  require_time(t, 0.0, task.horizon, "trajectory_point");
  return progress_at(task, params, t, abandonment_time(task, params));
}

bool plans_to_abandon(const AgentState& state, const TaskSpec& task,
                      const AgentParams& params) {
  if (state.x >= task.goal) return false;
  const double lhs =
      params.alpha() * std::log(task.goal - state.x) -
      log_zeta(params, state.t, task.horizon);
  const double rhs = task.reward == 0.0 ? kNegInf : std::log(task.reward);
  return abandons(lhs, rhs);
}

double planned_path(const AgentState& state, const TaskSpec& task,
                    const AgentParams& params, double s) {
  validate(task);
  require_time(state.t, 0.0, task.horizon, "planned_path state");
  require_time(s, state.t, task.horizon, "planned_path");
  if (state.x >= task.goal || plans_to_abandon(state, task, params)) {
    return state.x;
  }
  return state.x +
         (task.goal - state.x) * gamma_fraction(params, state.t, s, task.horizon);
}

double planned_rate(const AgentState& state, const TaskSpec& task,
                    const AgentParams& params, double s) {
  validate(task);
  require_time(state.t, 0.0, task.horizon, "planned_rate state");
  require_time(s, state.t, task.horizon, "planned_rate");
  if (state.x >= task.goal || plans_to_abandon(state, task, params)) {
    return 0.0;
  }
  const double log_weight =
      -log_discount_factor(params.discount(), state.t, s) /
      (params.alpha() - 1.0);
  return std::exp(std::log(task.goal - state.x) + log_weight -
                  log_gamma_span(params, state.t, task.horizon));
}

Trajectory sample_trajectory(const TaskSpec& task, const AgentParams& params,
                             int n) {
  validate(task);
  if (n < 2) throw DomainError("sample_trajectory: n must be >= 2");
  Trajectory out;
  out.t_star = abandonment_time(task, params);
  out.samples.reserve(n);

  const double horizon = task.horizon;
  const bool cumulative =
      task.goal > 0.0 && !closed_form_progress(params);
  double prev_t = 0.0;
  double prev_pi = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i == n - 1 ? horizon : horizon * i / (n - 1);
    double x;
    if (cumulative) {
      const double tt = std::min(t, out.t_star);
      if (tt >= singular_edge(horizon)) {
        x = task.goal;
      } else {
        prev_pi += progress_segment(params, horizon, prev_t, tt);
        prev_t = tt;
        x = -task.goal * std::expm1(-std::min(prev_pi, kProgressCap));
      }
    } else {
      x = progress_at(task, params, t, out.t_star);
    }
    if (!out.samples.empty()) x = std::max(x, out.samples.back().x);
    out.samples.push_back({t, x});
  }
  out.final_progress = out.samples.back().x;
  out.reached = out.final_progress >= task.goal * (1.0 - 1e-9);
  return out;
}

LhsPeak analyze_abandonment_lhs(const AgentParams& params, double horizon) {
  if (!params.is_hyperbolic_quadratic()) {
    throw DomainError(
        "analyze_abandonment_lhs requires the hyperbolic family with alpha=2");
  }
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double k = params.k();
  auto lhs = [&](double t) { return abandonment_lhs(params, horizon, t); };

  constexpr int kScan = 1024;
  int best = 0;
  double best_value = lhs(0.0);
  for (int j = 1; j <= kScan; ++j) {
    const double v = lhs(horizon * j / kScan);
    if (v > best_value) {
      best = j;
      best_value = v;
    }
  }
  const double lo = horizon * std::max(0, best - 1) / kScan;
  const double hi = horizon * std::min(kScan, best + 1) / kScan;
  const numeric::Extremum peak =
      numeric::golden_section_maximize(lhs, lo, hi, 1e-13 * horizon);

  LhsPeak out;
  out.t_argmax = peak.x;
  out.lhs_max = peak.value;
  const double kt = k * horizon;
  if (horizon <= (1.0 + kSqrt3) / k) {
    out.predicted_argmax = 0.0;
    out.predicted_max = 2.0 * (kt + 1.0) / (horizon * (kt + 2.0));
  } else {
    out.predicted_argmax = horizon - (1.0 + kSqrt3) / k;
    out.predicted_max =
        (kt + 2.0) * (kt + 2.0) / (3.0 * kSqrt3 * k * horizon * horizon);
  }
  return out;
}

}  // namespace pblab

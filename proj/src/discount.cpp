#include "pblab/discount.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pblab/errors.hpp"
#include "pblab/numeric.hpp"

namespace pblab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_ordered(double t, double s, const char* what) {
  if (!(s >= t)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": evaluation time s=" << s << " precedes t=" << t;
    throw DomainError(msg.str());
  }
}

double checked_generic(const DiscountModel& model, double t, double s) {
  const double g = model.evaluator()(t, s);
  if (!(g > 0.0 && g <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "generic discount returned " << g << " at (t=" << t << ", s=" << s
        << "); values must lie in (0, 1]";
    throw ConfigError("discount", msg.str());
  }
  return g;
}

// gamma_t(u)^(-1/(alpha-1)), the integrand of Gamma.
double gamma_weight(const AgentParams& params, double t, double u) {
  return std::exp(-log_discount_factor(params.discount(), t, u) /
                  (params.alpha() - 1.0));
}

double generic_gamma_integral(const AgentParams& params, double t, double from,
                              double to) {
  return numeric::integrate(
      [&](double u) { return gamma_weight(params, t, u); }, from, to,
      "gamma_t(u)^(-1/(alpha-1))");
}

}  // namespace

std::string_view to_string(DiscountFamily family) {
  switch (family) {
    case DiscountFamily::Exponential:
      return "exponential";
    case DiscountFamily::Hyperbolic:
      return "hyperbolic";
    case DiscountFamily::Generic:
      return "generic";
  }
  return "unknown";
}

DiscountModel::DiscountModel(DiscountFamily family, double k,
                             DiscountEvaluator evaluator)
    : family_(family), k_(k), evaluator_(std::move(evaluator)) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ConfigError("k", "k must be a positive finite number");
  }
  if (family == DiscountFamily::Generic && !evaluator_) {
    throw ConfigError("discount", "generic discount requires an evaluator");
  }
}

DiscountModel DiscountModel::exponential(double k) {
  return {DiscountFamily::Exponential, k, nullptr};
}

DiscountModel DiscountModel::hyperbolic(double k) {
  return {DiscountFamily::Hyperbolic, k, nullptr};
}

DiscountModel DiscountModel::generic(DiscountEvaluator evaluator, double k) {
  return {DiscountFamily::Generic, k, std::move(evaluator)};
}

AgentParams::AgentParams(DiscountModel discount, double alpha)
    : discount_(std::move(discount)), alpha_(alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha", "alpha must exceed 1");
  }
}

bool AgentParams::is_hyperbolic_quadratic() const noexcept {
  return family() == DiscountFamily::Hyperbolic && alpha_ == 2.0;
}

double discount_factor(const DiscountModel& model, double t, double s) {
  require_ordered(t, s, "discount_factor");
  switch (model.family()) {
    case DiscountFamily::Exponential:
      return std::exp(-model.k() * (s - t));
    case DiscountFamily::Hyperbolic:
      return 1.0 / (1.0 + model.k() * (s - t));
    case DiscountFamily::Generic:
      return checked_generic(model, t, s);
  }
  return 0.0;
}

double log_discount_factor(const DiscountModel& model, double t, double s) {
  require_ordered(t, s, "log_discount_factor");
  switch (model.family()) {
    case DiscountFamily::Exponential:
      return -model.k() * (s - t);
    case DiscountFamily::Hyperbolic:
      return -std::log1p(model.k() * (s - t));
    case DiscountFamily::Generic:
      return std::log(checked_generic(model, t, s));
  }
  return 0.0;
}

double big_gamma(const AgentParams& params, double t, double s) {
  require_ordered(t, s, "big_gamma");
  const double alpha = params.alpha();
  const double k = params.k();
  switch (params.family()) {
    case DiscountFamily::Exponential:
      return (alpha - 1.0) / k * std::exp(k * (s - t) / (alpha - 1.0));
    case DiscountFamily::Hyperbolic:
      return (alpha - 1.0) / (k * alpha) *
             std::pow(1.0 + k * (s - t), alpha / (alpha - 1.0));
    case DiscountFamily::Generic:
      return generic_gamma_integral(params, t, t, s);
  }
  return 0.0;
}

double gamma_difference(const AgentParams& params, double t, double from,
                        double to) {
  require_ordered(t, from, "gamma_difference");
  require_ordered(from, to, "gamma_difference");
  const double alpha = params.alpha();
  const double k = params.k();
  switch (params.family()) {
    case DiscountFamily::Exponential: {
      const double a = k / (alpha - 1.0);
      return (alpha - 1.0) / k * std::exp(a * (from - t)) *
             std::expm1(a * (to - from));
    }
    case DiscountFamily::Hyperbolic: {
      const double p = alpha / (alpha - 1.0);
      const double log_from = std::log1p(k * (from - t));
      const double log_to = std::log1p(k * (to - t));
      return (alpha - 1.0) / (k * alpha) * std::exp(p * log_from) *
             std::expm1(p * (log_to - log_from));
    }
    case DiscountFamily::Generic:
      return generic_gamma_integral(params, t, from, to);
  }
  return 0.0;
}

double log_gamma_span(const AgentParams& params, double t, double horizon) {
  require_ordered(t, horizon, "log_gamma_span");
  const double u = horizon - t;
  if (u == 0.0) return kNegInf;
  const double alpha = params.alpha();
  const double k = params.k();
  switch (params.family()) {
    case DiscountFamily::Exponential:
      return std::log((alpha - 1.0) / k) +
             numeric::log_expm1(k * u / (alpha - 1.0));
    case DiscountFamily::Hyperbolic:
      return std::log((alpha - 1.0) / (k * alpha)) +
             numeric::log_expm1(alpha / (alpha - 1.0) * std::log1p(k * u));
    case DiscountFamily::Generic:
      return std::log(generic_gamma_integral(params, t, t, horizon));
  }
  return 0.0;
}

double log_zeta(const AgentParams& params, double t, double horizon) {
  if (!(t >= 0.0) || t > horizon) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "zeta: t=" << t << " outside [0, " << horizon << "]";
    throw DomainError(msg.str());
  }
  const double u = horizon - t;
  if (u == 0.0) return kNegInf;
  const double alpha = params.alpha();
  const double k = params.k();
  switch (params.family()) {
    case DiscountFamily::Exponential:
      // ((alpha-1)/k)^(alpha-1) (1 - exp(-k(T-t)/(alpha-1)))^(alpha-1)
      return (alpha - 1.0) * (std::log((alpha - 1.0) / k) +
                              numeric::log1mexp(k * u / (alpha - 1.0)));
    case DiscountFamily::Hyperbolic: {
      // ((alpha-1)/(k alpha))^(alpha-1) ((1+ku)^p - 1)^(alpha-1) / (1+ku)
      const double log_b = std::log1p(k * u);
      return (alpha - 1.0) * (std::log((alpha - 1.0) / (k * alpha)) +
                              numeric::log_expm1(alpha / (alpha - 1.0) * log_b)) -
             log_b;
    }
    case DiscountFamily::Generic:
      return log_discount_factor(params.discount(), t, horizon) +
             (alpha - 1.0) * log_gamma_span(params, t, horizon);
  }
  return 0.0;
}

double zeta(const AgentParams& params, double t, double horizon) {
  return std::exp(log_zeta(params, t, horizon));
}

ZetaVerdict check_zeta_nonincreasing(const AgentParams& params, double horizon,
                                     int grid_points) {
  if (grid_points < 2) {
    throw DomainError("check_zeta_nonincreasing: grid_points must be >= 2");
  }
  if (!(horizon > 0.0)) {
    throw DomainError("check_zeta_nonincreasing: horizon must be positive");
  }
  const double step = horizon / (grid_points - 1);
  double prev_log = log_zeta(params, 0.0, horizon);
  for (int i = 1; i < grid_points; ++i) {
    const double t = i == grid_points - 1 ? horizon : i * step;
    const double cur_log = log_zeta(params, t, horizon);
    const double prev = std::exp(prev_log);
    const double cur = std::exp(cur_log);
    bool rose;
    if (std::isfinite(prev) && std::isfinite(cur)) {
      rose = cur > prev * (1.0 + 1e-9) + 1e-12;
    } else {
      rose = cur_log > prev_log + std::log1p(1e-9);
    }
    if (rose) return {false, t};
    prev_log = cur_log;
  }
  return {true, std::nullopt};
}

}  // namespace pblab

#pragma once

#include <functional>
#include <optional>
#include <string_view>

namespace pblab {

enum class DiscountFamily { Exponential, Hyperbolic, Generic };

std::string_view to_string(DiscountFamily family);

/// User-supplied discount gamma_t(s) for s >= t. Must be continuous in s,
/// return values in (0, 1], and equal 1 at s == t.
using DiscountEvaluator = std::function<double(double t, double s)>;

/// A discount function gamma_t(s) with strength k (1/time units).
///
/// The built-in families are exp(-k(s-t)) and 1/(1+k(s-t)). A generic model
/// wraps an arbitrary evaluator; its k is carried for labelling only.
class DiscountModel {
 public:
  static DiscountModel exponential(double k);
  static DiscountModel hyperbolic(double k);
  static DiscountModel generic(DiscountEvaluator evaluator, double k = 1.0);

  DiscountFamily family() const noexcept { return family_; }
  double k() const noexcept { return k_; }
  const DiscountEvaluator& evaluator() const noexcept { return evaluator_; }

 private:
  DiscountModel(DiscountFamily family, double k, DiscountEvaluator evaluator);

  DiscountFamily family_;
  double k_;
  DiscountEvaluator evaluator_;
};

/// Discount model plus the effort-cost exponent alpha (> 1) of c(v) = v^alpha.
class AgentParams {
 public:
  AgentParams(DiscountModel discount, double alpha);

  const DiscountModel& discount() const noexcept { return discount_; }
  double alpha() const noexcept { return alpha_; }
  DiscountFamily family() const noexcept { return discount_.family(); }
  double k() const noexcept { return discount_.k(); }

  /// Hyperbolic with alpha == 2, the case with fully closed-form trajectories.
  bool is_hyperbolic_quadratic() const noexcept;

 private:
  DiscountModel discount_;
  double alpha_;
};

/// gamma_t(s). Throws DomainError when s < t.
double discount_factor(const DiscountModel& model, double t, double s);

/// log gamma_t(s); finite even where gamma_t(s) underflows.
double log_discount_factor(const DiscountModel& model, double t, double s);

/// Gamma_t(s), the antiderivative of gamma_t(s)^(-1/(alpha-1)).
///
/// Built-in families use the closed forms
///   ((alpha-1)/k) exp(k(s-t)/(alpha-1))               (exponential)
///   ((alpha-1)/(k alpha)) (1+k(s-t))^(alpha/(alpha-1))  (hyperbolic)
/// and the generic family integrates from t, so Gamma_t(t) = 0 there. Only
/// differences of Gamma enter the trajectory formulas.
double big_gamma(const AgentParams& params, double t, double s);

/// Gamma_t(to) - Gamma_t(from) for t <= from <= to, evaluated without the
/// cancellation of subtracting two big_gamma values.
double gamma_difference(const AgentParams& params, double t, double from,
                        double to);

/// log(Gamma_t(T) - Gamma_t(t)); -inf at t == T.
double log_gamma_span(const AgentParams& params, double t, double horizon);

/// zeta(t) = gamma_t(T) (Gamma_t(T) - Gamma_t(t))^(alpha-1) for 0 <= t <= T.
double zeta(const AgentParams& params, double t, double horizon);

/// log zeta(t); -inf at t == T.
double log_zeta(const AgentParams& params, double t, double horizon);

struct ZetaVerdict {
  bool nonincreasing = true;
  /// Grid point at which zeta was first seen to rise, when it did.
  std::optional<double> violated_at;
};

/// Samples zeta on a uniform grid over [0, T]. zeta(t+h) <= zeta(t)(1+1e-9)+1e-12
/// counts as non-increasing.
ZetaVerdict check_zeta_nonincreasing(const AgentParams& params, double horizon,
                                     int grid_points);

}  // namespace pblab

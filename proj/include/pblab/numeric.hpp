#pragma once

#include <cstddef>
#include <functional>

namespace pblab::numeric {

/// Tolerances for adaptive Simpson quadrature.
struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 50;
  std::size_t max_evaluations = 20'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
/// The interval may be reversed (b < a), which negates the result.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureOptions& options = {});

/// Same as adaptive_simpson but throws NumericError when the requested
/// tolerance was not met; `what` names the integral in the diagnostic.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const char* what, const QuadratureOptions& options = {});

/// Bracket [lo, hi] with pred(lo) == false and pred(hi) == true. Shrinks the
/// bracket until hi - lo <= abs_tol or max_iter halvings, and returns hi (the
/// smallest point known to satisfy pred).
double bisect_first_true(const std::function<bool(double)>& pred, double lo,
                         double hi, int max_iter, double abs_tol);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double lo, double hi, double abs_tol,
                                 int max_iter = 200);

/// log(exp(x) - 1) for x > 0 without overflow or cancellation.
double log_expm1(double x);

/// log(1 - exp(-x)) for x > 0.
double log1mexp(double x);

}  // namespace pblab::numeric

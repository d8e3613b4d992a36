#include "pblab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pblab/errors.hpp"

namespace pblab::numeric {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  const QuadratureOptions& options;
  std::size_t evaluations = 0;
  bool converged = true;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;

    if (!std::isfinite(delta)) {
      converged = false;
      return left + right;
    }
    if (std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= options.max_depth || evaluations >= options.max_evaluations ||
        m <= a || b <= m) {
      converged = false;
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureOptions& options) {
  if (a == b) return {0.0, 0.0, 0, true};
  if (b < a) {
    QuadratureResult r = adaptive_simpson(f, b, a, options);
    r.value = -r.value;
    return r;
  }

  SimpsonState state{f, options};
  const double fa = state.eval(a);
  const double fb = state.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = state.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

  // A five-point pass gives a scale for the relative tolerance that does not
  // depend on a lucky three-point estimate.
  const double q1 = state.eval(0.5 * (a + m));
  const double q3 = state.eval(0.5 * (m + b));
  const double scale =
      std::abs((b - a) / 12.0 * (fa + 4.0 * q1 + 2.0 * fm + 4.0 * q3 + fb));
  const double tol = std::max(options.abs_tol, options.rel_tol * scale);

  const double value = state.recurse(a, b, fa, fm, fb, whole, tol, 0);
  QuadratureResult result;
  result.value = value;
  result.error_estimate = state.error;
  result.evaluations = state.evaluations;
  result.converged = state.converged && std::isfinite(value);
  return result;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const char* what, const QuadratureOptions& options) {
  const QuadratureResult r = adaptive_simpson(f, a, b, options);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "quadrature of " << what << " over [" << a << ", " << b
        << "] did not converge: value " << r.value << ", error estimate "
        << r.error_estimate << " after " << r.evaluations << " evaluations";
    throw NumericError(msg.str());
  }
  return r.value;
}

double bisect_first_true(const std::function<bool(double)>& pred, double lo,
                         double hi, int max_iter, double abs_tol) {
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Extremum golden_section_maximize(const std::function<double(double)>& f,
                                 double lo, double hi, double abs_tol,
                                 int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && b - a > abs_tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Extremum best{0.5 * (a + b), f(0.5 * (a + b))};
  for (const double x : {lo, hi, c, d}) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

double log_expm1(double x) {
  if (x > 30.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

double log1mexp(double x) {
  // Maechler's split keeps full precision on both sides of ln 2.
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (x < 0.6931471805599453) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

}  // namespace pblab::numeric

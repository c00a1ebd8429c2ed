#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "magspec/errors.hpp"

namespace magspec {

inline constexpr double kPi = 3.14159265358979323846;

// Double-exponential (tanh-sinh) quadrature on [a, b]. Handles integrable
// endpoint singularities without hand-derived weights. The integrand is
// called as f(x, da, db) where da = x - a and db = b - x are computed from
// the transform directly; near an endpoint the small distance is exact to
// machine precision even when x itself has rounded onto the endpoint, so
// singular factors should be evaluated from da/db, not from x.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-10) {
  const double s = 0.5 * (b - a);
  const double pi_half = 1.57079632679489661923;
  const double t_max = 6.2;  // past this the node weight underflows
  double prev = 0.0;
  double result = 0.0;
  for (int level = 0; level <= 12; ++level) {
    const double h = std::ldexp(1.0, -level);
    const long j_max = static_cast<long>(t_max / h);
    double sum = 0.0;
    for (long j = -j_max; j <= j_max; ++j) {
      const double t = static_cast<double>(j) * h;
      const double u = pi_half * std::sinh(t);
      const double eu = std::exp(-2.0 * std::fabs(u));
      const double d_near = 2.0 * s * eu / (1.0 + eu);
      // Skip nodes glued to an endpoint: their weight is at most comparable
      // to d_near, so for any integrable singularity the omitted mass is
      // far below tolerance, and singular factors of d_near could otherwise
      // underflow to an exact zero inside the integrand.
      if (d_near < 1e-280) continue;
      const double d_far = 2.0 * s / (1.0 + eu);
      double da, db, x;
      if (t >= 0.0) {
        db = d_near;
        da = d_far;
        x = b - db;
      } else {
        da = d_near;
        db = d_far;
        x = a + da;
      }
      const double sech_u = 2.0 * std::exp(-std::fabs(u)) / (1.0 + eu);
      const double w = pi_half * std::cosh(t) * sech_u * sech_u;
      if (w <= 0.0) continue;
      sum += w * f(x, da, db);
    }
    result = sum * h * s;
    if (level >= 4 && std::fabs(result - prev) <= rel_tol * std::fabs(result)) {
      return result;
    }
    prev = result;
  }
  return result;
}

// Convenience overload for integrands that do not need endpoint distances.
template <class F>
double tanh_sinh_plain(F&& f, double a, double b, double rel_tol = 1e-10) {
  return tanh_sinh([&f](double x, double, double) { return f(x); }, a, b, rel_tol);
}

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Classic adaptive Simpson with absolute tolerance. Used as the independent
// second route for cross-checks and for smooth outer integrals.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 40) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Bisection root finder for a continuous function with a sign change on
// [lo, hi]. Returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NoBracket("bisect: no sign change on the supplied bracket");
  }
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

// One Richardson step for a second-order quantity: v(h), v(h/2) -> limit.
inline double richardson2(double v_h, double v_h2) { return (4.0 * v_h2 - v_h) / 3.0; }

// Least-squares slope and intercept of y against x.
inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

// Log-log least-squares exponent of y against x (both positive).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly).first;
}

}  // namespace magspec

#pragma once

#include <functional>

namespace kgdelta::quadrature {

/// A root bracket with a verified sign change. Construction evaluates f at
/// both ends and throws NoSignChange unless f(lo)·f(hi) < 0 (an exact zero at
/// an endpoint is accepted).
struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;

  Bracket(const std::function<double(double)>& f, double lo, double hi);
};

/// Adaptive Gauss–Kronrod 15(7) quadrature of f over [a, b] to an absolute
/// tolerance. Intervals are halved until the local Kronrod−Gauss error
/// estimate meets its proportional share of the tolerance. Throws
/// SolverFailed if the interval budget is exhausted.
double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, int max_intervals = 4096);

/// ∫_tau^∞ sech^q(y) dy for q > 0, to ~1e-12 absolute. The infinite tail is
/// truncated at y* where the bound sech^q(y) ≤ 2^q e^{−qy} makes the remainder
/// smaller than 1e-16; past y* the integral is returned from that asymptotic.
double sech_power_integral(double q, double tau);

/// Brent's method (inverse quadratic / secant with bisection fallback) on a
/// verified bracket. Returns x with the bracket narrowed below tol.
double brent_root(const std::function<double(double)>& f, Bracket bracket,
                  double tol = 1e-14, int max_iter = 200);

/// 5-point central derivative of f at x, truncation error O(h⁴).
double central_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace kgdelta::quadrature

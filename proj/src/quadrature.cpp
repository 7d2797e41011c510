#include "kgdelta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "kgdelta/errors.hpp"

namespace kgdelta::quadrature {

namespace {

// Gauss–Kronrod 15(7) abscissae on [0, 1] and weights (QUADPACK dqk15).
// Odd-index abscissae plus the midpoint form the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Gk15Result {
  double value;
  double error;
};

Gk15Result gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 3; ++j) {
    const int i = 2 * j + 1;
    const double dx = half * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    resk += kWgk[i] * fsum;
    resg += kWg[j] * fsum;
  }
  for (int j = 0; j < 4; ++j) {
    const int i = 2 * j;
    const double dx = half * kXgk[i];
    resk += kWgk[i] * (f(c - dx) + f(c + dx));
  }
  return {resk * half, std::abs((resk - resg) * half)};
}

}  // namespace

Bracket::Bracket(const std::function<double(double)>& f, double lo_, double hi_)
    : lo(lo_), hi(hi_), f_lo(f(lo_)), f_hi(f(hi_)) {
  if (!(lo < hi))
    throw NoSignChange("bracket endpoints must satisfy lo < hi, got [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (f_lo * f_hi > 0.0)
    throw NoSignChange("no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]: f(lo)=" + std::to_string(f_lo) +
                       ", f(hi)=" + std::to_string(f_hi));
}

double adaptive_gk15(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_intervals) {
  if (a == b) return 0.0;
  const double sign = (a < b) ? 1.0 : -1.0;
  if (sign < 0) std::swap(a, b);
  const double total_len = b - a;

  struct Segment {
    double a, b;
  };
  std::vector<Segment> pending{{a, b}};
  double total = 0.0;
  int used = 0;
  while (!pending.empty()) {
    const Segment seg = pending.back();
    pending.pop_back();
    if (++used > max_intervals)
      throw SolverFailed("adaptive quadrature exhausted its budget of " +
                         std::to_string(max_intervals) + " intervals");
    const Gk15Result r = gk15(f, seg.a, seg.b);
    const double share = abs_tol * (seg.b - seg.a) / total_len;
    // The Kronrod/Gauss difference bottoms out at the rounding noise of the
    // segment's own partial sums; past that point refinement cannot converge
    // (both the error estimate and the share shrink linearly with length).
    const double noise_floor =
        100.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
    // Stop refining once the halves reach floating-point granularity.
    const double mid = 0.5 * (seg.a + seg.b);
    if (r.error <= std::max(share, noise_floor) || mid <= seg.a ||
        mid >= seg.b) {
      total += r.value;
    } else {
      pending.push_back({seg.a, mid});
      pending.push_back({mid, seg.b});
    }
  }
  return sign * total;
}

double sech_power_integral(double q, double tau) {
  if (!(q > 0.0))
    throw DomainError("sech power integral requires exponent q > 0, got " +
                      std::to_string(q));
  // Truncation point: 2^q e^{−q y}/q < 1e−16 for y ≥ y_star.
  const double y_star =
      std::numbers::ln2 + (16.0 * std::numbers::ln10 - std::log(q)) / q;
  if (tau >= y_star) {
    // Entire integral is below the 1e−16 bound; the leading asymptotic keeps
    // the result positive and strictly decreasing in tau.
    return std::pow(2.0, q) / q * std::exp(-q * tau);
  }
  const auto integrand = [q](double y) {
    return std::pow(1.0 / std::cosh(y), q);
  };
  return adaptive_gk15(integrand, tau, y_star, 1e-13);
}

double brent_root(const std::function<double(double)>& f, Bracket bracket,
                  double tol, int max_iter) {
  double a = bracket.lo, b = bracket.hi;
  double fa = bracket.f_lo, fb = bracket.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation (secant when a == c).
      const double s = fb / fa;
      double pp, qq;
      if (a == c) {
        pp = 2.0 * xm * s;
        qq = 1.0 - s;
      } else {
        const double q1 = fa / fc;
        const double r1 = fb / fc;
        pp = s * (2.0 * xm * q1 * (q1 - r1) - (b - a) * (r1 - 1.0));
        qq = (q1 - 1.0) * (r1 - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) qq = -qq;
      pp = std::abs(pp);
      if (2.0 * pp < std::min(3.0 * xm * qq - std::abs(tol1 * qq),
                              std::abs(e * qq))) {
        e = d;
        d = pp / qq;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

double central_diff(const std::function<double(double)>& f, double x,
                    double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) /
         (12.0 * h);
}

}  // namespace kgdelta::quadrature

#include "kgdelta/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgdelta/errors.hpp"
#include "kgdelta/quadrature.hpp"

namespace kgdelta::model {

namespace {

constexpr double kAdmissibilityMargin = 1e-14;

double kappa_of(const WaveSpec& spec) {
  return std::sqrt(spec.params.m * spec.params.m - spec.omega * spec.omega);
}

double admissibility_gap(const WaveSpec& spec) {
  const double m = spec.params.m;
  return m * m - spec.omega * spec.omega - 0.25 * spec.beta * spec.beta;
}

/// tau0 = artanh(−beta / (2 kappa)); the profile argument offset at x = 0.
double tau0_of(const WaveSpec& spec) {
  return std::atanh(-spec.beta / (2.0 * kappa_of(spec)));
}

double slope_closed_p3(double m, double alpha, double gamma, double omega) {
  const double k = std::sqrt(m * m - omega * omega);
  return 4.0 * omega * omega / k - 4.0 * k +
         (alpha * alpha * alpha / 2.0 + 6.0 * alpha) * omega -
         gamma * (2.0 + alpha * alpha / 2.0);
}

}  // namespace

ModelParams validate_params(double m, double alpha, double gamma, double p) {
  if (!(m > 0.0))
    throw DomainError("mass m must be positive, got m = " + std::to_string(m));
  if (!(p > 1.0))
    throw DomainError("nonlinearity exponent p must exceed 1, got p = " +
                      std::to_string(p));
  return ModelParams{m, alpha, gamma, p};
}

WaveSpec make_wave_spec(const ModelParams& params, double omega) {
  return WaveSpec{params, omega, params.gamma - params.alpha * omega};
}

double beta_max(const WaveSpec& spec) {
  const double m = spec.params.m;
  if (!(std::abs(spec.omega) < m))
    throw DomainError("beta_max requires |omega| < m");
  return 2.0 * std::sqrt(m * m - spec.omega * spec.omega);
}

bool admissible(const WaveSpec& spec) { return admissibility_gap(spec) > 0.0; }

void require_admissible(const WaveSpec& spec) {
  const double m = spec.params.m;
  if (!(admissibility_gap(spec) > kAdmissibilityMargin * m * m))
    throw NotAdmissible("no localized profile at omega = " +
                        std::to_string(spec.omega) + " (m^2 - omega^2 = " +
                        std::to_string(m * m - spec.omega * spec.omega) +
                        " must exceed beta^2/4 = " +
                        std::to_string(0.25 * spec.beta * spec.beta) + ")");
}

double phi(const WaveSpec& spec, double x) {
  require_admissible(spec);
  const double p = spec.params.p;
  const double k = kappa_of(spec);
  const double amp = 0.5 * (p + 1.0) * k * k;
  const double z = 0.5 * (p - 1.0) * k * std::abs(x) + tau0_of(spec);
  const double sech = 1.0 / std::cosh(z);
  return std::pow(amp * sech * sech, 1.0 / (p - 1.0));
}

double phi_prime(const WaveSpec& spec, double x, Side side) {
  require_admissible(spec);
  const double k = kappa_of(spec);
  const double z = 0.5 * (spec.params.p - 1.0) * k * std::abs(x) + tau0_of(spec);
  double sgn;
  if (x > 0.0)
    sgn = 1.0;
  else if (x < 0.0)
    sgn = -1.0;
  else
    sgn = (side == Side::Right) ? 1.0 : -1.0;
  return -phi(spec, x) * k * std::tanh(z) * sgn;
}

double charge(const WaveSpec& spec) {
  require_admissible(spec);
  if (spec.params.p == 3.0) {
    const double m = spec.params.m;
    const double alpha = spec.params.alpha;
    const double k2 = m * m - spec.omega * spec.omega;
    const double b = spec.beta;
    return -4.0 * spec.omega * std::sqrt(k2) - 2.0 * spec.omega * b -
           alpha * k2 + 0.25 * alpha * b * b;
  }
  return charge_quadrature(spec);
}

double charge_quadrature(const WaveSpec& spec) {
  require_admissible(spec);
  const double p = spec.params.p;
  const double alpha = spec.params.alpha;
  const double k = kappa_of(spec);
  const double c_factor = std::pow(0.5 * (p + 1.0) * k * k, 2.0 / (p - 1.0));
  const double tau = tau0_of(spec);
  const double integral = quadrature::sech_power_integral(4.0 / (p - 1.0), tau);
  const double norm_sq = 4.0 * c_factor * integral / ((p - 1.0) * k);
  const double phi0_sq =
      c_factor *
      std::pow(1.0 - spec.beta * spec.beta / (4.0 * k * k), 2.0 / (p - 1.0));
  return -spec.omega * norm_sq - 0.5 * alpha * phi0_sq;
}

double charge_slope(const WaveSpec& spec) {
  require_admissible(spec);
  const ModelParams& pr = spec.params;
  if (pr.p == 3.0)
    return slope_closed_p3(pr.m, pr.alpha, pr.gamma, spec.omega);

  // The admissibility gap is quadratic in omega; its roots bound the branch.
  const double a = -(1.0 + 0.25 * pr.alpha * pr.alpha);
  const double b = 0.5 * pr.alpha * pr.gamma;
  const double c = pr.m * pr.m - 0.25 * pr.gamma * pr.gamma;
  const double disc = b * b - 4.0 * a * c;
  // gap(omega) > 0 at an admissible spec forces two real roots around omega.
  const double root = std::sqrt(std::max(disc, 0.0));
  const double w1 = (-b - root) / (2.0 * a);
  const double w2 = (-b + root) / (2.0 * a);
  const double lo = std::min(w1, w2), hi = std::max(w1, w2);
  const double dist = std::min(spec.omega - lo, hi - spec.omega);
  const double h = std::max(1e-5, std::min(1e-3, dist / 16.0));

  for (int k : {-2, -1, 1, 2}) {
    WaveSpec probe = make_wave_spec(pr, spec.omega + k * h);
    if (!(admissibility_gap(probe) > kAdmissibilityMargin * pr.m * pr.m))
      throw StencilOutOfRange(
          "slope stencil leaves the admissible frequency range at omega = " +
          std::to_string(spec.omega + k * h));
  }
  const auto q_of = [&pr](double w) {
    return charge_quadrature(make_wave_spec(pr, w));
  };
  return quadrature::central_diff(q_of, spec.omega, h);
}

double threshold_omega_tilde(const ModelParams& params) {
  if (params.p != 3.0)
    throw DomainError("omega-tilde threshold is a p = 3 closed form, got p = " +
                      std::to_string(params.p));
  if (params.alpha != 0.0)
    throw DomainError("omega-tilde threshold requires alpha = 0, got alpha = " +
                      std::to_string(params.alpha));
  const double m = params.m, g = params.gamma;
  if (!(std::abs(g) < 2.0 * m))
    throw DomainError("omega-tilde threshold requires |gamma| < 2m");
  return m * std::sqrt(0.5 + g / (std::sqrt(g * g + 32.0 * m * m) + g));
}

OmegaAlphaPair threshold_omega_alpha_pm(const ModelParams& params) {
  if (params.p != 3.0)
    throw DomainError("omega-alpha thresholds are a p = 3 closed form, got p = " +
                      std::to_string(params.p));
  if (params.gamma != 0.0)
    throw DomainError("omega-alpha thresholds require gamma = 0, got gamma = " +
                      std::to_string(params.gamma));
  const double alpha_star = 2.0 * std::sqrt(std::sqrt(5.0) - 2.0);
  if (!(std::abs(params.alpha) < alpha_star))
    throw DomainError(
        "no sign-definite slope regime for |alpha| >= " +
        std::to_string(alpha_star) + ", got alpha = " +
        std::to_string(params.alpha));
  const double kind =
      0.25 * (params.alpha * params.alpha * params.alpha / 2.0 + 6.0 * params.alpha);
  const double r = std::abs(kind) / std::sqrt(4.0 + kind * kind);
  const double scale = params.m / std::sqrt(2.0);
  return OmegaAlphaPair{scale * std::sqrt(1.0 + r), scale * std::sqrt(1.0 - r)};
}

double gamma_tilde(double alpha, double omega, double m) {
  if (!(std::abs(omega) < m))
    throw DomainError("gamma_tilde requires |omega| < m");
  const double k = std::sqrt(m * m - omega * omega);
  return 2.0 / (4.0 + alpha * alpha) *
         (4.0 * omega * omega / k - 4.0 * k +
          (alpha * alpha * alpha / 2.0 + 6.0 * alpha) * omega);
}

int n_omega(const WaveSpec& spec) {
  require_admissible(spec);
  return spec.beta <= 0.0 ? 1 : 2;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::OrbitallyStable: return "OrbitallyStable";
    case Verdict::OrbitallyUnstable: return "OrbitallyUnstable";
    case Verdict::LinearlyUnstable: return "LinearlyUnstable";
    case Verdict::OrbitallyUnstableRadial: return "OrbitallyUnstableRadial";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(SlopeSource s) {
  return s == SlopeSource::ClosedFormP3 ? "ClosedFormP3" : "NumericQuadrature";
}

StabilityVerdict classify(const WaveSpec& spec, double slope_tolerance) {
  require_admissible(spec);
  const ModelParams& pr = spec.params;
  const bool closed = (pr.p == 3.0);
  const double slope = charge_slope(spec);
  const SlopeSource source =
      closed ? SlopeSource::ClosedFormP3 : SlopeSource::NumericQuadrature;
  const double tol =
      slope_tolerance > 0.0 ? slope_tolerance : (closed ? 1e-9 : 1e-6);

  const int n = n_omega(spec);
  Verdict verdict;
  if (std::abs(slope) <= tol)
    verdict = Verdict::Inconclusive;
  else if (n == 1)
    verdict = slope > 0.0 ? Verdict::OrbitallyStable : Verdict::OrbitallyUnstable;
  else
    verdict = slope > 0.0 ? Verdict::LinearlyUnstable
                          : Verdict::OrbitallyUnstableRadial;

  std::map<std::string, double> ev;
  ev["beta"] = spec.beta;
  ev["beta_max"] = beta_max(spec);
  ev["admissibility_margin"] = admissibility_gap(spec);
  ev["slope_tolerance"] = tol;
  if (closed) {
    ev["gamma_tilde"] = gamma_tilde(pr.alpha, spec.omega, pr.m);
    if (pr.alpha == 0.0 && std::abs(pr.gamma) < 2.0 * pr.m)
      ev["omega_tilde"] = threshold_omega_tilde(pr);
    if (pr.gamma == 0.0 &&
        std::abs(pr.alpha) < 2.0 * std::sqrt(std::sqrt(5.0) - 2.0)) {
      const OmegaAlphaPair oa = threshold_omega_alpha_pm(pr);
      ev["omega_alpha_minus"] = oa.minus;
      ev["omega_alpha_plus"] = oa.plus;
    }
  }

  // Sign-definite slope windows for 1 < p < 5 with same-sign couplings, and
  // the window on which stability is claimed at m = 1. A conflict flag marks
  // any disagreement with the count × slope table used above.
  if (pr.p < 5.0 && pr.alpha * pr.gamma > 0.0) {
    const double half_sqrt = 0.5 * pr.m * std::sqrt(pr.p - 1.0);
    const double w_ratio = pr.alpha * pr.gamma / (4.0 + pr.alpha * pr.alpha);
    const double w_mass = pr.alpha * pr.m * pr.m / pr.gamma;
    double expected = 0.0;
    if (pr.alpha > 0.0) {
      if (spec.omega > -half_sqrt && spec.omega < 0.0) expected = -1.0;
      if (spec.omega > std::max(w_ratio, half_sqrt) &&
          spec.omega < std::min(w_mass, pr.m))
        expected = 1.0;
    } else {
      if (spec.omega > std::max(0.0, w_ratio) &&
          spec.omega < std::min(half_sqrt, w_mass))
        expected = -1.0;
      if (spec.omega > std::max(w_mass, half_sqrt) &&
          spec.omega < std::min(w_ratio, pr.m))
        expected = 1.0;
    }
    if (expected != 0.0) {
      ev["slope_window_expected_sign"] = expected;
      if (std::abs(slope) > tol && expected * slope < 0.0)
        ev["slope_window_conflict"] = 1.0;
    }
    if (pr.m == 1.0) {
      const double lo = pr.alpha > 0.0 ? std::max(w_ratio, half_sqrt)
                                       : std::max(w_mass, half_sqrt);
      const double hi = pr.alpha > 0.0 ? std::min(w_mass, 1.0)
                                       : std::min(w_ratio, 1.0);
      if (lo < spec.omega && spec.omega < hi) {
        ev["stable_window_lo"] = lo;
        ev["stable_window_hi"] = hi;
        if (verdict != Verdict::OrbitallyStable &&
            verdict != Verdict::Inconclusive)
          ev["stable_window_conflict"] = 1.0;
      }
    }
  }
  return StabilityVerdict{verdict, n, slope, source, std::move(ev)};
}

}  // namespace kgdelta::model

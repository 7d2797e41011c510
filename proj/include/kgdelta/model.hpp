#pragma once

#include <map>
#include <string>

namespace kgdelta::model {

/// Physical parameters of the wave equation with point couplings at x = 0.
struct ModelParams {
  double m;      ///< mass, > 0
  double alpha;  ///< coupling of the time-derivative point term
  double gamma;  ///< coupling of the potential point term
  double p;      ///< nonlinearity exponent, > 1
};

/// Validates and packs parameters. Throws DomainError naming the offending
/// field when m ≤ 0 or p ≤ 1.
ModelParams validate_params(double m, double alpha, double gamma, double p);

/// A candidate standing wave: parameters plus a frequency. The effective
/// point-interaction strength beta = gamma − alpha·omega is cached.
struct WaveSpec {
  ModelParams params;
  double omega;
  double beta;
};

WaveSpec make_wave_spec(const ModelParams& params, double omega);

/// Largest |beta| compatible with omega: 2·sqrt(m² − ω²). Requires |ω| < m.
double beta_max(const WaveSpec& spec);

/// Existence region of the localized profile: m² − ω² > β²/4 (strict).
bool admissible(const WaveSpec& spec);

/// Throws NotAdmissible unless the spec is admissible with a relative margin
/// of 1e−14·m² (guards the artanh evaluation in the profile).
void require_admissible(const WaveSpec& spec);

enum class Side { Left, Right };

/// The standing-wave profile at x. Positive everywhere; even in x only when
/// beta = 0.
double phi(const WaveSpec& spec, double x);

/// Analytic one-sided derivative of the profile; `side` matters only at x = 0,
/// where phi'(0⁺) − phi'(0⁻) = beta·phi(0).
double phi_prime(const WaveSpec& spec, double x, Side side = Side::Right);

/// Charge of the standing wave, Q = −ω‖φ‖² − (α/2)φ(0)². Closed form at
/// p = 3, quadrature reduction otherwise.
double charge(const WaveSpec& spec);

/// The sech-power-integral evaluation of the charge, valid for every p > 1;
/// at p = 3 it must agree with the closed form (cross-check path).
double charge_quadrature(const WaveSpec& spec);

/// dQ/dω along the standing-wave branch. Closed form at p = 3; 5-point
/// central difference of charge_quadrature otherwise, with the step shrunk
/// near the admissibility boundary. Throws StencilOutOfRange when the stencil
/// would leave the admissible set.
double charge_slope(const WaveSpec& spec);

/// Frequency at which dQ/dω changes sign when alpha = 0, p = 3 and |γ| < 2m.
double threshold_omega_tilde(const ModelParams& params);

/// The two positive slope-threshold frequencies for gamma = 0, p = 3.
/// `minus` ≥ `plus` always; the slope roots on (−ω_a, ω_a) sit at
/// {−plus, +minus} for alpha < 0 and {−minus, +plus} for alpha > 0.
struct OmegaAlphaPair {
  double minus;
  double plus;
};

/// Throws DomainError for |alpha| ≥ 2·sqrt(sqrt(5) − 2) (no sign-definite
/// regime remains past that coupling).
OmegaAlphaPair threshold_omega_alpha_pm(const ModelParams& params);

/// Critical gamma at which dQ/dω vanishes for p = 3:
/// sign(dQ/dω) = −sign(gamma − gamma_tilde). Requires |ω| < m.
double gamma_tilde(double alpha, double omega, double m);

/// Negative-direction count of the linearized energy: 1 if beta ≤ 0, else 2.
int n_omega(const WaveSpec& spec);

enum class Verdict {
  OrbitallyStable,
  OrbitallyUnstable,
  LinearlyUnstable,
  OrbitallyUnstableRadial,
  Inconclusive,
};

enum class SlopeSource { ClosedFormP3, NumericQuadrature };

const char* to_string(Verdict v);
const char* to_string(SlopeSource s);

struct StabilityVerdict {
  Verdict verdict;
  int n_omega;
  double slope;
  SlopeSource slope_source;
  /// Numeric evidence: beta, admissibility margin, applicable thresholds, and
  /// window cross-check flags (1.0 when a printed stability claim disagrees
  /// with the count × slope table).
  std::map<std::string, double> evidence;
};

/// Stability classification from (n_omega, sign of slope):
///   (1, +) OrbitallyStable   (1, −) OrbitallyUnstable
///   (2, +) LinearlyUnstable  (2, −) OrbitallyUnstableRadial
/// |slope| ≤ tolerance yields Inconclusive. slope_tolerance ≤ 0 selects the
/// per-source default (1e−9 closed form, 1e−6 quadrature).
StabilityVerdict classify(const WaveSpec& spec, double slope_tolerance = 0.0);

}  // namespace kgdelta::model

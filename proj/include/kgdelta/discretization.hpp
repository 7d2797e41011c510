#pragma once

#include <complex>
#include <string>
#include <vector>

#include "kgdelta/model.hpp"

namespace kgdelta::discretization {

/// Uniform symmetric grid on [−L, L] with an even cell count N, so node N/2
/// sits exactly at x = 0. Fields live on the interior nodes (homogeneous
/// Dirichlet at ±L).
struct Grid {
  double L = 0.0;
  int N = 0;
  double h = 0.0;
  int center = 0;              ///< interior index of the x = 0 node (N/2 − 1)
  std::vector<double> x;       ///< interior node positions x_1 .. x_{N−1}

  int interior() const { return N - 1; }
};

/// Throws BadGrid unless L > 0 and N is even and ≥ 4.
Grid make_grid(double L, int N);

/// Grid sized for a spec's decay rate: L = 30/sqrt(m² − ω²), spacing ≈ target.
Grid default_grid(const model::WaveSpec& spec, double target_h = 0.01);

/// Complex pair (u, v) on the interior nodes, stored as split real arrays.
struct DiscreteField {
  std::vector<double> ur, ui, vr, vi;

  DiscreteField() = default;
  explicit DiscreteField(int n) : ur(n, 0.0), ui(n, 0.0), vr(n, 0.0), vi(n, 0.0) {}
  int size() const { return static_cast<int>(ur.size()); }
};

/// (u, v) = (φ_ω, iω φ_ω) sampled on the interior nodes.
DiscreteField sample_standing_wave(const Grid& grid,
                                   const model::WaveSpec& spec);

/// Trapezoid energy: ½‖u'‖² + (m²/2)‖u‖² + ½‖v‖² + (γ/2)|u(0)|²
/// − (1/(p+1))∫|u|^{p+1}, derivative term summed over cells (boundary cells
/// close against the Dirichlet zeros).
double discrete_energy(const Grid& grid, const model::ModelParams& params,
                       const DiscreteField& f);

/// Trapezoid charge: Im ∫ u·conj(v) − (α/2)|u(0)|².
double discrete_charge(const Grid& grid, const model::ModelParams& params,
                       const DiscreteField& f);

/// Real inner product of two fields in the (μ, γ)-weighted metric:
/// Re[∫u'w̄' + μ²∫uw̄ + γ u(0)w̄(0) + ∫v z̄]. Throws MuTooSmall when
/// μ ≤ μ₀(γ) = max(0, −γ/2), below which the form is not a norm.
double weighted_inner(const Grid& grid, const DiscreteField& a,
                      const DiscreteField& b, double mu, double gamma);

double weighted_norm(const Grid& grid, const DiscreteField& f, double mu,
                     double gamma);

/// Plain H¹×L² metric (μ = m, γ = 0).
double h_norm(const Grid& grid, const DiscreteField& f, double m);

struct OrbitalDistance {
  double distance;
  double theta;  ///< optimal phase, arg of the complex pairing
};

/// inf over phases θ of ‖U − e^{iθ}Φ‖ in the (m, 0) metric, by the closed
/// form d² = ‖U‖² + ‖Φ‖² − 2|⟨U, Φ⟩_ℂ|.
OrbitalDistance orbital_distance(const Grid& grid,
                                 const model::ModelParams& params,
                                 const DiscreteField& U,
                                 const DiscreteField& Phi);

/// Discrete gradient of E + ωQ at an arbitrary field, measured in the
/// H⁻¹ × L² dual norm (one (−Δ_h + 1) solve). O(h²) at the sampled wave.
double stationarity_residual(const Grid& grid, const model::WaveSpec& spec,
                             const DiscreteField& f);

/// Same, evaluated at the sampled standing wave itself.
double stationarity_residual(const Grid& grid, const model::WaveSpec& spec);

/// Discrete pairing {E, Q}(u, v). Vanishes for fields compatible with the
/// derivative-jump interface; the center node uses an averaged one-sided
/// second difference so the defect decays at O(h²) for compatible pairs.
double poisson_bracket_EQ(const Grid& grid, const model::ModelParams& params,
                          const DiscreteField& f);

/// Symmetric tridiagonal operator on the interior nodes.
struct DiscreteOperator {
  std::vector<double> diag;
  std::vector<double> off;  ///< superdiagonal = subdiagonal
  std::string kind;
};

/// Linearization blocks: −∂² + (m² − ω²) − c·φ^{p−1} + (β/h)δ_center with
/// c = p (plus block) and c = 1 (minus block).
DiscreteOperator build_L_plus(const Grid& grid, const model::WaveSpec& spec);
DiscreteOperator build_L_minus(const Grid& grid, const model::WaveSpec& spec);

std::vector<double> apply(const DiscreteOperator& op,
                          const std::vector<double>& x);

/// First-order system generator: (u, v) ↦ (v, Bu + Sv), with
/// B = Δ_h − m² − (γ/h)δ_c and S = −i(α/h)δ_c.
void apply_generator(const Grid& grid, const model::ModelParams& params,
                     const DiscreteField& in, DiscreteField& out);

/// Solves (generator − λ)U = rhs by eliminating v = λu + f and one complex
/// tridiagonal solve. Throws SingularSystem on a vanishing pivot.
DiscreteField resolvent_apply(const Grid& grid,
                              const model::ModelParams& params, double lambda,
                              const DiscreteField& rhs);

/// Thomas solve of a complex tridiagonal system with constant off-diagonals.
/// diag and rhs sized n, off is the scalar sub/super entry.
std::vector<std::complex<double>> solve_tridiag_const_off(
    std::vector<std::complex<double>> diag, std::complex<double> off,
    std::vector<std::complex<double>> rhs);

}  // namespace kgdelta::discretization

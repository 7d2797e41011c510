#include "kgdelta/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgdelta/errors.hpp"
#include "kgdelta/kernels.hpp"

namespace kgdelta::discretization {

namespace {

using model::ModelParams;
using model::WaveSpec;

/// Σ over cells of (a_{j+1}−a_j)(b_{j+1}−b_j) with Dirichlet closure at both
/// ends (a_0 = a_N = 0 cells included).
double cell_diff_dot(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  double s = a[0] * b[0] + a[n - 1] * b[n - 1];
  for (std::size_t j = 0; j + 1 < n; ++j)
    s += (a[j + 1] - a[j]) * (b[j + 1] - b[j]);
  return s;
}

double sum_sq_pair(const std::vector<double>& re, const std::vector<double>& im) {
  const std::size_t n = re.size();
  return kernels::sum_sq(n, re.data()) + kernels::sum_sq(n, im.data());
}

}  // namespace

Grid make_grid(double L, int N) {
  if (!(L > 0.0))
    throw BadGrid("half-length L must be positive, got " + std::to_string(L));
  if (N < 4 || N % 2 != 0)
    throw BadGrid("cell count N must be even and at least 4, got " +
                  std::to_string(N) + " (a node must sit exactly at x = 0)");
  Grid g;
  g.L = L;
  g.N = N;
  g.h = 2.0 * L / N;
  g.center = N / 2 - 1;
  g.x.resize(N - 1);
  for (int j = 1; j < N; ++j) g.x[j - 1] = -L + j * g.h;
  return g;
}

Grid default_grid(const WaveSpec& spec, double target_h) {
  model::require_admissible(spec);
  const double kappa =
      std::sqrt(spec.params.m * spec.params.m - spec.omega * spec.omega);
  const double L = 30.0 / kappa;
  int N = static_cast<int>(std::ceil(2.0 * L / target_h / 2.0)) * 2;
  return make_grid(L, std::max(N, 4));
}

DiscreteField sample_standing_wave(const Grid& grid, const WaveSpec& spec) {
  model::require_admissible(spec);
  DiscreteField f(grid.interior());
  for (int j = 0; j < grid.interior(); ++j) {
    const double ph = model::phi(spec, grid.x[j]);
    f.ur[j] = ph;
    f.vi[j] = spec.omega * ph;
  }
  return f;
}

double discrete_energy(const Grid& grid, const ModelParams& params,
                       const DiscreteField& f) {
  const std::size_t n = f.ur.size();
  const double grad2 = kernels::cell_diff_sq(n, f.ur.data()) +
                       kernels::cell_diff_sq(n, f.ui.data());
  const double mass2 = sum_sq_pair(f.ur, f.ui);
  const double vel2 = sum_sq_pair(f.vr, f.vi);
  double pot = 0.0;
  const double half_pow = 0.5 * (params.p + 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double r2 = f.ur[j] * f.ur[j] + f.ui[j] * f.ui[j];
    pot += (params.p == 3.0) ? r2 * r2 : std::pow(r2, half_pow);
  }
  const int c = grid.center;
  const double u0_sq = f.ur[c] * f.ur[c] + f.ui[c] * f.ui[c];
  return 0.5 * grad2 / grid.h + 0.5 * params.m * params.m * grid.h * mass2 +
         0.5 * grid.h * vel2 + 0.5 * params.gamma * u0_sq -
         grid.h * pot / (params.p + 1.0);
}

double discrete_charge(const Grid& grid, const ModelParams& params,
                       const DiscreteField& f) {
  const std::size_t n = f.ur.size();
  // Im(u conj(v)) = ui·vr − ur·vi
  const double im = kernels::dot(n, f.ui.data(), f.vr.data()) -
                    kernels::dot(n, f.ur.data(), f.vi.data());
  const int c = grid.center;
  const double u0_sq = f.ur[c] * f.ur[c] + f.ui[c] * f.ui[c];
  return grid.h * im - 0.5 * params.alpha * u0_sq;
}

double weighted_inner(const Grid& grid, const DiscreteField& a,
                      const DiscreteField& b, double mu, double gamma) {
  const double mu0 = gamma >= 0.0 ? 0.0 : 0.5 * std::abs(gamma);
  if (!(mu > mu0))
    throw MuTooSmall("weighted metric requires mu > " + std::to_string(mu0) +
                     " for gamma = " + std::to_string(gamma) + ", got mu = " +
                     std::to_string(mu));
  const std::size_t n = a.ur.size();
  const double grad = cell_diff_dot(a.ur, b.ur) + cell_diff_dot(a.ui, b.ui);
  const double mass = kernels::dot(n, a.ur.data(), b.ur.data()) +
                      kernels::dot(n, a.ui.data(), b.ui.data());
  const double vel = kernels::dot(n, a.vr.data(), b.vr.data()) +
                     kernels::dot(n, a.vi.data(), b.vi.data());
  const int c = grid.center;
  const double point = a.ur[c] * b.ur[c] + a.ui[c] * b.ui[c];
  return grad / grid.h + mu * mu * grid.h * mass + gamma * point +
         grid.h * vel;
}

double weighted_norm(const Grid& grid, const DiscreteField& f, double mu,
                     double gamma) {
  return std::sqrt(std::max(weighted_inner(grid, f, f, mu, gamma), 0.0));
}

double h_norm(const Grid& grid, const DiscreteField& f, double m) {
  return weighted_norm(grid, f, m, 0.0);
}

OrbitalDistance orbital_distance(const Grid& grid, const ModelParams& params,
                                 const DiscreteField& U,
                                 const DiscreteField& Phi) {
  const std::size_t n = U.ur.size();
  const double m2 = params.m * params.m;
  // Complex pairing ⟨U, Φ⟩ in the (m, 0) metric; real and imaginary parts.
  // Re(z w̄) = zr·wr + zi·wi, Im(z w̄) = zi·wr − zr·wi, applied to the
  // derivative cells, the mass term, and the v term.
  double cr = cell_diff_dot(U.ur, Phi.ur) + cell_diff_dot(U.ui, Phi.ui);
  double ci = cell_diff_dot(U.ui, Phi.ur) - cell_diff_dot(U.ur, Phi.ui);
  cr /= grid.h;
  ci /= grid.h;
  cr += m2 * grid.h * (kernels::dot(n, U.ur.data(), Phi.ur.data()) +
                       kernels::dot(n, U.ui.data(), Phi.ui.data()));
  ci += m2 * grid.h * (kernels::dot(n, U.ui.data(), Phi.ur.data()) -
                       kernels::dot(n, U.ur.data(), Phi.ui.data()));
  cr += grid.h * (kernels::dot(n, U.vr.data(), Phi.vr.data()) +
                  kernels::dot(n, U.vi.data(), Phi.vi.data()));
  ci += grid.h * (kernels::dot(n, U.vi.data(), Phi.vr.data()) -
                  kernels::dot(n, U.vr.data(), Phi.vi.data()));
  const double nU = weighted_inner(grid, U, U, params.m, 0.0);
  const double nPhi = weighted_inner(grid, Phi, Phi, params.m, 0.0);
  const double d2 = nU + nPhi - 2.0 * std::hypot(cr, ci);
  return OrbitalDistance{std::sqrt(std::max(d2, 0.0)), std::atan2(ci, cr)};
}

double stationarity_residual(const Grid& grid, const WaveSpec& spec,
                             const DiscreteField& f) {
  model::require_admissible(spec);
  const ModelParams& pr = spec.params;
  const int n = grid.interior();
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const double om = spec.omega;

  // ru = −Δu + m²u − |u|^{p−1}u + iω v + (β/h) u_c δ_c
  std::vector<double> tr(n), ti(n);
  kernels::lap_combine(n, inv_h2, pr.m * pr.m, f.ur.data(), tr.data());
  kernels::lap_combine(n, inv_h2, pr.m * pr.m, f.ui.data(), ti.data());
  std::vector<double> rur(n), rui(n);
  for (int j = 0; j < n; ++j) {
    const double r2 = f.ur[j] * f.ur[j] + f.ui[j] * f.ui[j];
    const double w = (pr.p == 3.0) ? r2 : std::pow(r2, 0.5 * (pr.p - 1.0));
    rur[j] = -tr[j] - w * f.ur[j] - om * f.vi[j];
    rui[j] = -ti[j] - w * f.ui[j] + om * f.vr[j];
  }
  const int c = grid.center;
  rur[c] += spec.beta / grid.h * f.ur[c];
  rui[c] += spec.beta / grid.h * f.ui[c];

  // rv = v − iω u
  double l2v = 0.0;
  for (int j = 0; j < n; ++j) {
    const double rvr = f.vr[j] + om * f.ui[j];
    const double rvi = f.vi[j] - om * f.ur[j];
    l2v += rvr * rvr + rvi * rvi;
  }

  // Dual norm of ru: ⟨(−Δ + 1)⁻¹ ru, ru⟩. One complex Thomas solve covers
  // both split parts.
  std::vector<std::complex<double>> diag(n, {2.0 * inv_h2 + 1.0, 0.0});
  std::vector<std::complex<double>> rhs(n);
  for (int j = 0; j < n; ++j) rhs[j] = {rur[j], rui[j]};
  const auto w = solve_tridiag_const_off(std::move(diag), {-inv_h2, 0.0},
                                         std::move(rhs));
  double dual = 0.0;
  for (int j = 0; j < n; ++j)
    dual += rur[j] * w[j].real() + rui[j] * w[j].imag();
  return std::sqrt(std::max(grid.h * dual + grid.h * l2v, 0.0));
}

double stationarity_residual(const Grid& grid, const WaveSpec& spec) {
  return stationarity_residual(grid, spec, sample_standing_wave(grid, spec));
}

double poisson_bracket_EQ(const Grid& grid, const ModelParams& params,
                          const DiscreteField& f) {
  const int n = grid.interior();
  const int c = grid.center;
  if (c < 3 || c + 3 >= n)
    throw BadGrid("grid too coarse for the one-sided interface stencils");
  const double inv_h2 = 1.0 / (grid.h * grid.h);

  // Laplacian with the center entry replaced by the average of the two
  // one-sided second differences, so the interface jump enters at O(h²).
  const auto lap_mod = [&](const std::vector<double>& u, std::vector<double>& out) {
    kernels::lap_combine(n, inv_h2, 0.0, u.data(), out.data());
    const double right = (2.0 * u[c] - 5.0 * u[c + 1] + 4.0 * u[c + 2] - u[c + 3]) * inv_h2;
    const double left = (2.0 * u[c] - 5.0 * u[c - 1] + 4.0 * u[c - 2] - u[c - 3]) * inv_h2;
    out[c] = 0.5 * (right + left);
  };
  std::vector<double> lr(n), li(n);
  lap_mod(f.ur, lr);
  lap_mod(f.ui, li);

  const double m2 = params.m * params.m;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double r2 = f.ur[j] * f.ur[j] + f.ui[j] * f.ui[j];
    const double w = (params.p == 3.0) ? r2 : std::pow(r2, 0.5 * (params.p - 1.0));
    double e1r = -lr[j] + m2 * f.ur[j] - w * f.ur[j];
    double e1i = -li[j] + m2 * f.ui[j] - w * f.ui[j];
    if (j == c) {
      // The (γ/h)u_c term pairs to Im(u_c ū_c) = 0; kept for completeness.
      e1r += params.gamma / grid.h * f.ur[c] + params.alpha / grid.h * f.vi[c];
      e1i += params.gamma / grid.h * f.ui[c] - params.alpha / grid.h * f.vr[c];
    }
    acc += e1i * f.ur[j] - e1r * f.ui[j];  // Im(E1 conj(u))
  }
  return -grid.h * acc;
}

namespace {

DiscreteOperator build_block(const Grid& grid, const WaveSpec& spec, double c) {
  model::require_admissible(spec);
  const int n = grid.interior();
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const double k2 =
      spec.params.m * spec.params.m - spec.omega * spec.omega;
  DiscreteOperator op;
  op.diag.resize(n);
  op.off.assign(n - 1, -inv_h2);
  const double pm1 = spec.params.p - 1.0;
  for (int j = 0; j < n; ++j) {
    const double ph = model::phi(spec, grid.x[j]);
    op.diag[j] = 2.0 * inv_h2 + k2 - c * std::pow(ph, pm1);
  }
  op.diag[grid.center] += spec.beta / grid.h;
  return op;
}

}  // namespace

DiscreteOperator build_L_plus(const Grid& grid, const WaveSpec& spec) {
  DiscreteOperator op = build_block(grid, spec, spec.params.p);
  op.kind = "plus-block";
  return op;
}

DiscreteOperator build_L_minus(const Grid& grid, const WaveSpec& spec) {
  DiscreteOperator op = build_block(grid, spec, 1.0);
  op.kind = "minus-block";
  return op;
}

std::vector<double> apply(const DiscreteOperator& op,
                          const std::vector<double>& x) {
  const std::size_t n = op.diag.size();
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = op.diag[j] * x[j];
    if (j > 0) s += op.off[j - 1] * x[j - 1];
    if (j + 1 < n) s += op.off[j] * x[j + 1];
    y[j] = s;
  }
  return y;
}

void apply_generator(const Grid& grid, const ModelParams& params,
                     const DiscreteField& in, DiscreteField& out) {
  const int n = grid.interior();
  out.ur = in.vr;
  out.ui = in.vi;
  out.vr.resize(n);
  out.vi.resize(n);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  kernels::lap_combine(n, inv_h2, params.m * params.m, in.ur.data(),
                       out.vr.data());
  kernels::lap_combine(n, inv_h2, params.m * params.m, in.ui.data(),
                       out.vi.data());
  const int c = grid.center;
  out.vr[c] -= params.gamma / grid.h * in.ur[c];
  out.vi[c] -= params.gamma / grid.h * in.ui[c];
  // S v = −i(α/h) v_c δ_c
  out.vr[c] += params.alpha / grid.h * in.vi[c];
  out.vi[c] -= params.alpha / grid.h * in.vr[c];
}

DiscreteField resolvent_apply(const Grid& grid, const ModelParams& params,
                              double lambda, const DiscreteField& rhs) {
  const int n = grid.interior();
  const int c = grid.center;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  // Eliminate v = λu + f, leaving
  //   (Δ_h − m² − λ² − (γ + iλα)/h δ_c) u = g + λf + i(α/h) f_c δ_c.
  std::vector<std::complex<double>> diag(
      n, {-2.0 * inv_h2 - params.m * params.m - lambda * lambda, 0.0});
  diag[c] += std::complex<double>(-params.gamma / grid.h,
                                  -lambda * params.alpha / grid.h);
  std::vector<std::complex<double>> b(n);
  for (int j = 0; j < n; ++j)
    b[j] = std::complex<double>(rhs.vr[j] + lambda * rhs.ur[j],
                                rhs.vi[j] + lambda * rhs.ui[j]);
  b[c] += std::complex<double>(0.0, params.alpha / grid.h) *
          std::complex<double>(rhs.ur[c], rhs.ui[c]);
  const auto u =
      solve_tridiag_const_off(std::move(diag), {inv_h2, 0.0}, std::move(b));
  DiscreteField out(n);
  for (int j = 0; j < n; ++j) {
    out.ur[j] = u[j].real();
    out.ui[j] = u[j].imag();
    out.vr[j] = lambda * u[j].real() + rhs.ur[j];
    out.vi[j] = lambda * u[j].imag() + rhs.ui[j];
  }
  return out;
}

std::vector<std::complex<double>> solve_tridiag_const_off(
    std::vector<std::complex<double>> diag, std::complex<double> off,
    std::vector<std::complex<double>> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(diag[i - 1]) < 1e-300)
      throw SingularSystem("tridiagonal pivot vanished at row " +
                           std::to_string(i - 1));
    const std::complex<double> m = off / diag[i - 1];
    diag[i] -= m * off;
    rhs[i] -= m * rhs[i - 1];
  }
  if (std::abs(diag[n - 1]) < 1e-300)
    throw SingularSystem("tridiagonal pivot vanished at the last row");
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
  return rhs;
}

}  // namespace kgdelta::discretization

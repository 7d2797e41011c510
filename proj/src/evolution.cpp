#include "kgdelta/evolution.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgdelta/errors.hpp"
#include "kgdelta/kernels.hpp"
#include "kgdelta/spectra.hpp"

namespace kgdelta::evolution {

namespace {

using discretization::DiscreteField;
using discretization::Grid;
using model::ModelParams;
using model::WaveSpec;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::NormExploded: return "norm-exploded";
    case Termination::SolverFailed: return "solver-failed";
  }
  return "unknown";
}

ImexStepper::ImexStepper(const Grid& grid, const ModelParams& params,
                         double dt, bool linear_only)
    : grid_(grid), params_(params), dt_(dt), linear_only_(linear_only) {
  model::validate_params(params.m, params.alpha, params.gamma, params.p);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw DomainError("time step must be positive and finite");
  const int n = grid.interior();
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  factored_diag_.assign(
      n, {2.0 / dt + 0.5 * dt * (2.0 * inv_h2 + params.m * params.m), 0.0});
  factored_diag_[grid.center] += std::complex<double>(
      0.5 * dt * params.gamma / grid.h, params.alpha / grid.h);
  off_ = {-0.5 * dt * inv_h2, 0.0};
  // Forward-eliminate once; per-step solves reuse the pivots.
  for (int i = 1; i < n; ++i) {
    if (std::abs(factored_diag_[i - 1]) < 1e-300)
      throw SingularSystem("time-step matrix factorization hit a zero pivot");
    factored_diag_[i] -= off_ * off_ / factored_diag_[i - 1];
  }
  rhs_.resize(n);
  lap_r_.resize(n);
  lap_i_.resize(n);
}

void ImexStepper::step(DiscreteField& f) {
  const int n = grid_.interior();
  const int c = grid_.center;
  const double dt = dt_;
  const double inv_h2 = 1.0 / (grid_.h * grid_.h);
  const double pm1 = params_.p - 1.0;

  if (!linear_only_)
    kernels::nonlinear_kick(n, 0.5 * dt, pm1, f.ur.data(), f.ui.data(),
                            f.vr.data(), f.vi.data());

  // rhs = (2/dt) u + 2 v + (dt/2) B u, with the interface terms of B and of
  // the eliminated v-coupling folded into the center entry.
  kernels::lap_combine(n, inv_h2, params_.m * params_.m, f.ur.data(),
                       lap_r_.data());
  kernels::lap_combine(n, inv_h2, params_.m * params_.m, f.ui.data(),
                       lap_i_.data());
  for (int j = 0; j < n; ++j)
    rhs_[j] = {2.0 / dt * f.ur[j] + 2.0 * f.vr[j] + 0.5 * dt * lap_r_[j],
               2.0 / dt * f.ui[j] + 2.0 * f.vi[j] + 0.5 * dt * lap_i_[j]};
  const std::complex<double> uc(f.ur[c], f.ui[c]);
  rhs_[c] -= 0.5 * dt * params_.gamma / grid_.h * uc;
  rhs_[c] += std::complex<double>(0.0, params_.alpha / grid_.h) * uc;

  // Pre-factored Thomas sweep.
  for (int i = 1; i < n; ++i)
    rhs_[i] -= off_ / factored_diag_[i - 1] * rhs_[i - 1];
  rhs_[n - 1] /= factored_diag_[n - 1];
  for (int i = n - 1; i-- > 0;)
    rhs_[i] = (rhs_[i] - off_ * rhs_[i + 1]) / factored_diag_[i];

  if (!std::isfinite(rhs_[c].real()) || !std::isfinite(rhs_[c].imag()))
    throw SolverFailed("time step produced non-finite values");

  for (int j = 0; j < n; ++j) {
    const double ur_new = rhs_[j].real();
    const double ui_new = rhs_[j].imag();
    f.vr[j] = 2.0 / dt * (ur_new - f.ur[j]) - f.vr[j];
    f.vi[j] = 2.0 / dt * (ui_new - f.ui[j]) - f.vi[j];
    f.ur[j] = ur_new;
    f.ui[j] = ui_new;
  }

  if (!linear_only_)
    kernels::nonlinear_kick(n, 0.5 * dt, pm1, f.ur.data(), f.ui.data(),
                            f.vr.data(), f.vi.data());
}

TimeSeries evolve(const DiscreteField& U0, const ModelParams& params,
                  const EvolveConfig& config) {
  if (!(config.t_end > 0.0))
    throw DomainError("evolution horizon t_end must be positive");
  if (config.monitor_stride < 1)
    throw DomainError("monitor stride must be at least 1");
  const Grid& grid = config.grid;
  if (static_cast<int>(U0.ur.size()) != grid.interior())
    throw BadGrid("initial data does not match the grid");

  ImexStepper stepper(grid, params, config.dt, config.linear_only);
  const double mu =
      config.weighted_mu > 0.0 ? config.weighted_mu
                               : std::max(params.m, -params.gamma);

  std::optional<DiscreteField> phi;
  if (config.reference)
    phi = discretization::sample_standing_wave(grid, *config.reference);

  TimeSeries ts;
  DiscreteField f = U0;
  const auto record = [&](double t) {
    ts.times.push_back(t);
    ts.energy.push_back(discretization::discrete_energy(grid, params, f));
    ts.charge.push_back(discretization::discrete_charge(grid, params, f));
    ts.orbital_dist.push_back(
        phi ? discretization::orbital_distance(grid, params, f, *phi).distance
            : 0.0);
    ts.h_norm.push_back(discretization::h_norm(grid, f, params.m));
    ts.weighted_norm.push_back(
        discretization::weighted_norm(grid, f, mu, params.gamma));
  };
  record(0.0);

  const long n_steps = std::lround(config.t_end / config.dt);
  const double threshold_sq =
      config.blowup_threshold * config.blowup_threshold;
  for (long k = 0; k < n_steps; ++k) {
    try {
      stepper.step(f);
    } catch (const SolverFailed&) {
      ts.terminated = Termination::SolverFailed;
      record((k + 1) * config.dt);
      return ts;
    }
    const double n2 = discretization::weighted_inner(grid, f, f, params.m, 0.0);
    if (!std::isfinite(n2) || n2 > threshold_sq) {
      ts.terminated = Termination::NormExploded;
      record((k + 1) * config.dt);
      return ts;
    }
    if ((k + 1) % config.monitor_stride == 0 || k + 1 == n_steps)
      record((k + 1) * config.dt);
  }
  return ts;
}

DiscreteField duhamel_oracle(const DiscreteField& U0,
                             const ModelParams& params, double T,
                             const Grid& grid, bool linear_only) {
  if (grid.N > 400)
    throw BadGrid("the integral-form oracle is restricted to small grids (N <= 400)");
  if (!(T > 0.0)) throw DomainError("oracle horizon must be positive");
  const int n = grid.interior();
  const int c = grid.center;
  const double inv_h2 = 1.0 / (grid.h * grid.h);

  using Mat = Eigen::MatrixXcd;
  using Vec = Eigen::VectorXcd;
  Mat A = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    A(j, n + j) = 1.0;
    A(n + j, j) = -2.0 * inv_h2 - params.m * params.m;
    if (j > 0) A(n + j, j - 1) = inv_h2;
    if (j + 1 < n) A(n + j, j + 1) = inv_h2;
  }
  A(n + c, c) -= params.gamma / grid.h;
  A(n + c, n + c) = std::complex<double>(0.0, -params.alpha / grid.h);

  // Even interval count with spacing near 2e-3 keeps the Simpson pass exact
  // at the endpoint.
  const int M = std::max(2, 2 * static_cast<int>(std::ceil(T / 4e-3)));
  const double dtm = T / M;
  const Mat E = (dtm * A).exp();

  Vec W0(2 * n);
  for (int j = 0; j < n; ++j) {
    W0[j] = std::complex<double>(U0.ur[j], U0.ui[j]);
    W0[n + j] = std::complex<double>(U0.vr[j], U0.vi[j]);
  }
  std::vector<Vec> W(M + 1);
  W[0] = W0;
  for (int j = 0; j < M; ++j) W[j + 1] = E * W[j];

  const auto unpack = [&](const Vec& U) {
    DiscreteField out(n);
    for (int j = 0; j < n; ++j) {
      out.ur[j] = U[j].real();
      out.ui[j] = U[j].imag();
      out.vr[j] = U[n + j].real();
      out.vi[j] = U[n + j].imag();
    }
    return out;
  };
  if (linear_only) return unpack(W[M]);

  const double pm1 = params.p - 1.0;
  const auto F = [&](const Vec& U) {
    Vec out = Vec::Zero(2 * n);
    for (int j = 0; j < n; ++j) {
      const double r2 = std::norm(U[j]);
      const double w = (pm1 == 2.0) ? r2 : std::pow(r2, 0.5 * pm1);
      out[n + j] = w * U[j];
    }
    return out;
  };

  std::vector<Vec> U = W;
  double first_diff = -1.0;
  for (int it = 0; it < 50; ++it) {
    std::vector<Vec> Fv(M + 1), EF(M + 1);
    for (int j = 0; j <= M; ++j) {
      Fv[j] = F(U[j]);
      EF[j] = E * Fv[j];
    }
    // Running trapezoid transported by the semigroup (odd endpoints).
    std::vector<Vec> Itr(M + 1);
    Itr[0] = Vec::Zero(2 * n);
    for (int j = 0; j < M; ++j)
      Itr[j + 1] = E * Itr[j] + 0.5 * dtm * (EF[j] + Fv[j + 1]);
    // Composite Simpson transported by the semigroup (even endpoints).
    std::vector<Vec> Isi(M / 2 + 1);
    Isi[0] = Vec::Zero(2 * n);
    for (int k = 0; k < M / 2; ++k)
      Isi[k + 1] = E * (E * Isi[k]) +
                   dtm / 3.0 *
                       (E * EF[2 * k] + 4.0 * EF[2 * k + 1] + Fv[2 * k + 2]);
    double diff = 0.0;
    for (int j = 0; j <= M; ++j) {
      Vec next = W[j] + (j % 2 == 0 ? Isi[j / 2] : Itr[j]);
      diff = std::max(diff, (next - U[j]).cwiseAbs().maxCoeff());
      U[j] = std::move(next);
    }
    if (!std::isfinite(diff) ||
        (first_diff > 0.0 && diff > 1e8 * std::max(first_diff, 1.0)))
      throw NoContraction(
          "Picard iteration diverged; horizon exceeds the contraction window "
          "(last update " + std::to_string(diff) + ")");
    if (first_diff < 0.0) first_diff = diff;
    if (diff < 1e-13) break;
  }
  return unpack(U[M]);
}

BlowupSeries blowup_ode(double T_param, double dt) {
  if (!(T_param > 0.0)) throw DomainError("blow-up parameter must be positive");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const double sqrt2 = std::sqrt(2.0);
  const double t_star = sqrt2 * T_param;
  const auto analytic = [&](double t) {
    return t < t_star ? 1.0 / std::tanh(T_param - t / sqrt2)
                      : std::numeric_limits<double>::infinity();
  };

  BlowupSeries out;
  out.divergence_time = kNaN;
  double v = 1.0 / std::tanh(T_param);
  double w = 1.0 / (std::sinh(T_param) * std::sinh(T_param)) / sqrt2;
  double t = 0.0;
  const auto push = [&]() {
    const double va = analytic(t);
    out.times.push_back(t);
    out.v_numeric.push_back(v);
    out.v_analytic.push_back(va);
    out.abs_err.push_back(std::isfinite(va)
                              ? std::abs(v - va)
                              : std::numeric_limits<double>::infinity());
  };
  push();
  const auto rhs = [](double vv, double ww, double& dv, double& dw) {
    dv = ww;
    dw = vv * vv * vv - vv;
  };
  while (true) {
    double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
    rhs(v, w, k1v, k1w);
    rhs(v + 0.5 * dt * k1v, w + 0.5 * dt * k1w, k2v, k2w);
    rhs(v + 0.5 * dt * k2v, w + 0.5 * dt * k2w, k3v, k3w);
    rhs(v + dt * k3v, w + dt * k3w, k4v, k4w);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    t += dt;
    push();
    if (v > 1e3 || !std::isfinite(v)) {
      out.divergence_time = t;
      break;
    }
    if (t > 3.0 * T_param) break;
  }
  return out;
}

StabilityReport stability_experiment(const WaveSpec& spec, double epsilon,
                                     PerturbationMode mode,
                                     const EvolveConfig& config) {
  model::require_admissible(spec);
  const Grid& grid = config.grid;
  DiscreteField U0 = discretization::sample_standing_wave(grid, spec);
  if (mode == PerturbationMode::Scale) {
    for (int j = 0; j < grid.interior(); ++j) {
      U0.ur[j] *= 1.0 + epsilon;
      U0.ui[j] *= 1.0 + epsilon;
      U0.vr[j] *= 1.0 + epsilon;
      U0.vi[j] *= 1.0 + epsilon;
    }
  } else if (epsilon != 0.0) {
    const auto lp = discretization::build_L_plus(grid, spec);
    const double ground = spectra::eig_bisect(lp, 1)[0];
    auto psi = spectra::eigenvector(lp, ground);
    double l2 = 0.0;
    for (double x : psi) l2 += x * x;
    const double scale = 1.0 / std::sqrt(grid.h * l2);
    for (int j = 0; j < grid.interior(); ++j)
      U0.ur[j] += epsilon * scale * psi[j];
  }

  EvolveConfig cfg = config;
  cfg.reference = spec;
  StabilityReport rep;
  rep.time_to_tenfold = kNaN;
  rep.series = evolve(U0, spec.params, cfg);
  rep.terminated = rep.series.terminated;
  const auto& d = rep.series.orbital_dist;
  rep.initial_distance = d.front();
  rep.final_distance = d.back();
  for (std::size_t i = 0; i < d.size(); ++i) {
    // A trajectory that explodes ends on non-finite monitors; the maximum
    // tracks the last finite observation.
    if (!std::isfinite(d[i])) break;
    rep.max_distance = std::max(rep.max_distance, d[i]);
    if (std::isnan(rep.time_to_tenfold) && rep.initial_distance > 0.0 &&
        d[i] >= 10.0 * rep.initial_distance)
      rep.time_to_tenfold = rep.series.times[i];
  }
  rep.growth_factor =
      rep.initial_distance > 0.0 ? rep.max_distance / rep.initial_distance : 0.0;
  return rep;
}

double growth_bound_estimate(const Grid& grid, const ModelParams& params,
                             double mu) {
  const double mu0 = params.gamma >= 0.0 ? 0.0 : -0.5 * params.gamma;
  if (!(mu > mu0))
    throw MuTooSmall("growth estimate needs mu above the definiteness floor " +
                     std::to_string(mu0));
  const int n = grid.interior();
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  discretization::DiscreteOperator form;
  form.kind = "weighted-u-form";
  form.diag.assign(n, 2.0 * inv_h2 + mu * mu);
  form.diag[grid.center] += params.gamma / grid.h;
  form.off.assign(n - 1, -inv_h2);
  const double lam_min = spectra::eig_bisect(form, 1)[0];
  if (!(lam_min > 0.0))
    throw MuTooSmall("weighted form is not positive at this mu");
  return 0.5 * (mu * mu - params.m * params.m) * std::max(1.0, 1.0 / lam_min);
}

}  // namespace kgdelta::evolution

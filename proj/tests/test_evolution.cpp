#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "kgdelta/discretization.hpp"
#include "kgdelta/errors.hpp"
#include "kgdelta/evolution.hpp"
#include "kgdelta/model.hpp"

namespace {

using namespace kgdelta;
using discretization::DiscreteField;
using discretization::Grid;
using discretization::make_grid;
using evolution::EvolveConfig;

model::WaveSpec spec_of(double m, double alpha, double gamma, double p,
                        double omega) {
  return model::make_wave_spec(model::validate_params(m, alpha, gamma, p),
                               omega);
}

double sup_diff(const DiscreteField& a, const DiscreteField& b) {
  double d = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    d = std::max(d, std::hypot(a.ur[j] - b.ur[j], a.ui[j] - b.ui[j]));
    d = std::max(d, std::hypot(a.vr[j] - b.vr[j], a.vi[j] - b.vi[j]));
  }
  return d;
}

// The wave-packet pair used across the linear-flow checks.
DiscreteField gaussian_pair(const Grid& g) {
  DiscreteField f(g.interior());
  for (int j = 0; j < g.interior(); ++j) {
    const double x = g.x[j];
    const double eu = std::exp(-x * x);
    const double ev = std::exp(-(x - 2.0) * (x - 2.0));
    f.ur[j] = eu;
    f.ui[j] = 0.3 * eu * std::sin(2.0 * x);
    f.vr[j] = 0.5 * ev;
    f.vi[j] = -0.2 * ev * std::cos(x);
  }
  return f;
}

}  // namespace

TEST_SUITE("evolution") {

TEST_CASE("termination labels") {
  CHECK(std::strcmp(evolution::to_string(evolution::Termination::Completed),
                    "completed") == 0);
  CHECK(std::strcmp(evolution::to_string(evolution::Termination::NormExploded),
                    "norm-exploded") == 0);
  CHECK(std::strcmp(evolution::to_string(evolution::Termination::SolverFailed),
                    "solver-failed") == 0);
}

TEST_CASE("stepper rejects a non-positive step and fixes the zero state") {
  const auto params = model::validate_params(1.0, 0.3, -0.4, 3.0);
  const Grid g = make_grid(10.0, 200);
  CHECK_THROWS_AS(evolution::ImexStepper(g, params, 0.0), DomainError);
  CHECK_THROWS_AS(evolution::ImexStepper(g, params, -1e-3), DomainError);

  evolution::ImexStepper st(g, params, 1e-3);
  DiscreteField z(g.interior());
  st.step(z);
  for (int j = 0; j < g.interior(); ++j) {
    CHECK(z.ur[j] == 0.0);
    CHECK(z.vi[j] == 0.0);
  }
}

TEST_CASE("standing wave is a discrete relative equilibrium") {
  const auto s = spec_of(1.0, 0.0, -0.5, 3.0, 0.8);
  EvolveConfig cfg;
  cfg.grid = make_grid(30.0, 3000);
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.monitor_stride = 100;
  cfg.reference = s;
  const auto U0 = discretization::sample_standing_wave(cfg.grid, s);
  const auto ts = evolution::evolve(U0, s.params, cfg);

  CHECK(ts.terminated == evolution::Termination::Completed);
  CHECK(ts.times.front() == 0.0);
  CHECK(ts.times.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ts.energy.size() == ts.times.size());

  double e_drift = 0.0, q_drift = 0.0, d_orb = 0.0;
  for (std::size_t k = 0; k < ts.times.size(); ++k) {
    e_drift = std::max(e_drift, std::abs(ts.energy[k] / ts.energy[0] - 1.0));
    q_drift = std::max(q_drift, std::abs(ts.charge[k] / ts.charge[0] - 1.0));
    d_orb = std::max(d_orb, ts.orbital_dist[k]);
  }
  CHECK(e_drift < 1e-9);
  CHECK(q_drift < 1e-9);
  CHECK(d_orb < 2e-3);  // O(h^2) sampling defect, not growth
}

TEST_CASE("monitor stride records start, strides and the final step") {
  const auto s = spec_of(1.0, 0.0, 0.0, 3.0, 0.5);
  EvolveConfig cfg;
  cfg.grid = make_grid(10.0, 100);
  cfg.dt = 1e-3;
  cfg.t_end = 10.0e-3;
  cfg.monitor_stride = 3;
  const auto U0 = discretization::sample_standing_wave(cfg.grid, s);
  const auto ts = evolution::evolve(U0, s.params, cfg);
  REQUIRE(ts.times.size() == 5);  // t = 0, 3dt, 6dt, 9dt, 10dt
  CHECK(ts.times[1] == doctest::Approx(3e-3));
  CHECK(ts.times[4] == doctest::Approx(10e-3));
}

TEST_CASE("linear flow preserves the evolution metric") {
  const auto params = model::validate_params(1.0, 0.4, 1.0, 3.0);
  EvolveConfig cfg;
  cfg.grid = make_grid(30.0, 2000);
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.monitor_stride = 100;
  cfg.linear_only = true;
  const auto ts = evolution::evolve(gaussian_pair(cfg.grid), params, cfg);
  CHECK(ts.terminated == evolution::Termination::Completed);
  double drift = 0.0;
  for (double w : ts.weighted_norm)
    drift = std::max(drift, std::abs(w / ts.weighted_norm.front() - 1.0));
  CHECK(drift < 1e-10);
}

TEST_CASE("deeply focusing data trips the explosion monitor") {
  const auto params = model::validate_params(1.0, 0.0, 0.0, 3.0);
  EvolveConfig cfg;
  cfg.grid = make_grid(10.0, 400);
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.monitor_stride = 10;
  DiscreteField f(cfg.grid.interior());
  for (int j = 0; j < cfg.grid.interior(); ++j)
    f.ur[j] = 30.0 / std::cosh(cfg.grid.x[j]);
  const auto ts = evolution::evolve(f, params, cfg);
  CHECK(ts.terminated == evolution::Termination::NormExploded);
  CHECK(ts.times.back() < 1.0);
}

TEST_CASE("integral-form oracle: semigroup property of the linear flow") {
  const auto params = model::validate_params(1.0, 0.3, -0.4, 3.0);
  const Grid g = make_grid(8.0, 80);
  const auto U0 = gaussian_pair(g);
  const auto once = evolution::duhamel_oracle(U0, params, 0.4, g, true);
  auto half = evolution::duhamel_oracle(U0, params, 0.2, g, true);
  half = evolution::duhamel_oracle(half, params, 0.2, g, true);
  CHECK(sup_diff(once, half) < 1e-10);

  CHECK_THROWS_AS(
      evolution::duhamel_oracle(U0, params, 0.1, make_grid(10.0, 500), true),
      BadGrid);
}

TEST_CASE("integral-form oracle agrees with the split-step integrator") {
  const auto s = spec_of(1.0, 0.3, -0.4, 3.0, 0.5);
  const Grid g = make_grid(10.0, 120);
  DiscreteField U0(g.interior());
  for (int j = 0; j < g.interior(); ++j) {
    const double ph = model::phi(s, g.x[j]);
    U0.ur[j] = ph;
    U0.ui[j] = 0.05 * ph;
    U0.vi[j] = 0.5 * ph;
  }
  const double T = 0.25;
  const auto oracle = evolution::duhamel_oracle(U0, s.params, T, g);

  DiscreteField f = U0;
  evolution::ImexStepper st(g, s.params, 5e-4);
  for (int k = 0; k < 500; ++k) st.step(f);
  CHECK(sup_diff(oracle, f) < 1e-5);
}

TEST_CASE("constant-core reduction rides the exact pole") {
  const auto series = evolution::blowup_ode(1.0, 1e-4);
  CHECK(series.v_numeric.front() ==
        doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-15));
  CHECK(series.v_analytic.front() == series.v_numeric.front());

  double worst = 0.0;
  std::size_t k5000 = 5000;  // t = 0.5
  REQUIRE(series.times.size() > k5000);
  CHECK(series.times[k5000] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(series.v_numeric[k5000] ==
        doctest::Approx(1.0 / std::tanh(1.0 - 0.5 / std::sqrt(2.0)))
            .epsilon(1e-6));
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (series.v_analytic[k] >= 100.0) break;
    worst = std::max(worst, series.abs_err[k]);
  }
  CHECK(worst < 1e-6);
  CHECK(std::isfinite(series.divergence_time));
  CHECK(std::abs(series.divergence_time - std::sqrt(2.0)) < 0.01);
}

TEST_CASE("scale perturbation stays near the orbit on a stable branch") {
  const auto s = spec_of(1.0, 0.0, -0.5, 3.0, 0.8);
  EvolveConfig cfg;
  cfg.grid = make_grid(30.0, 3000);
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.monitor_stride = 100;
  const auto rep = evolution::stability_experiment(
      s, 1e-2, evolution::PerturbationMode::Scale, cfg);
  CHECK(rep.terminated == evolution::Termination::Completed);
  CHECK(rep.initial_distance > 0.0);
  CHECK(rep.max_distance < 5e-2);
  CHECK(rep.growth_factor < 5.0);
  CHECK(std::isnan(rep.time_to_tenfold));
  CHECK(rep.series.times.size() == rep.series.orbital_dist.size());
}

TEST_CASE("unstable-direction perturbation is normalized to epsilon") {
  const auto s = spec_of(1.0, 0.0, -0.5, 3.0, 0.3);
  EvolveConfig cfg;
  cfg.grid = make_grid(30.0, 3000);
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  cfg.monitor_stride = 10;
  const auto rep = evolution::stability_experiment(
      s, 1e-3, evolution::PerturbationMode::UnstableDirection, cfg);
  // The added direction has unit L^2 mass, so the orbital (energy-metric)
  // offset is epsilon up to the gradient contribution of the mode.
  CHECK(rep.initial_distance > 2e-4);
  CHECK(rep.initial_distance < 5e-3);
  CHECK(rep.terminated == evolution::Termination::Completed);
}

TEST_CASE("growth budget of the indefinite-metric linear flow") {
  const auto params = model::validate_params(1.0, 0.2, -3.0, 3.0);
  const Grid g = make_grid(30.0, 2000);
  CHECK_THROWS_AS(evolution::growth_bound_estimate(g, params, 1.5),
                  MuTooSmall);
  const double beta = evolution::growth_bound_estimate(g, params, 1.6);
  CHECK(beta == doctest::Approx(2.5069269069563616).epsilon(1e-9));
  // Above-floor weight: the metric mismatch alone sets the budget.
  const double beta3 = evolution::growth_bound_estimate(g, params, 3.0);
  CHECK(beta3 == doctest::Approx(0.5 * (9.0 - 1.0)).epsilon(0.05));
}

TEST_CASE("resolvent norm obeys the growth-budget bound") {
  const auto params = model::validate_params(1.0, 0.2, -3.0, 3.0);
  const Grid g = make_grid(30.0, 2000);
  const double mu = 1.6;
  const double beta = evolution::growth_bound_estimate(g, params, mu);
  const double lambda = 10.0 * beta;
  const double bound = 1.0 / (lambda - beta);

  for (int trial = 0; trial < 3; ++trial) {
    DiscreteField F(g.interior());
    for (int j = 0; j < g.interior(); ++j) {
      const double env = std::exp(-0.02 * std::abs(g.x[j]));
      F.ur[j] = env * std::sin((trial + 1) * 0.37 * g.x[j]);
      F.ui[j] = env * std::cos((trial + 2) * 0.53 * g.x[j]);
      F.vr[j] = env * std::sin((trial + 1) * 0.71 * g.x[j] + 0.2);
      F.vi[j] = env * std::cos((trial + 3) * 0.29 * g.x[j]);
    }
    const auto U =
        discretization::resolvent_apply(g, params, lambda, F);
    const double nU =
        discretization::weighted_norm(g, U, mu, params.gamma);
    const double nF =
        discretization::weighted_norm(g, F, mu, params.gamma);
    CHECK(nU / nF <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("a detached constant core follows the space-free reduction inside "
          "its light cone") {
  const auto params = model::validate_params(1.0, 0.0, 0.5, 3.0);
  const Grid g = make_grid(30.0, 6000);
  const double T = 0.7, x0 = 5.0;
  const double w = std::sqrt(2.0) * T + 1.0, edge = 0.5;
  const double pi = std::acos(-1.0);

  DiscreteField f(g.interior());
  const double v0 = 1.0 / std::tanh(T);
  const double w0 = 1.0 / (std::sinh(T) * std::sinh(T) * std::sqrt(2.0));
  for (int j = 0; j < g.interior(); ++j) {
    const double d = std::abs(g.x[j] - x0);
    double chi = 0.0;
    if (d <= w)
      chi = 1.0;
    else if (d <= w + edge)
      chi = 0.5 * (1.0 + std::cos(pi * (d - w) / edge));
    f.ur[j] = v0 * chi;
    f.vr[j] = w0 * chi;
  }

  int jc = 0;
  for (int j = 1; j < g.interior(); ++j)
    if (std::abs(g.x[j] - x0) < std::abs(g.x[jc] - x0)) jc = j;

  const double dt = 2e-4;
  evolution::ImexStepper st(g, params, dt);
  double t = 0.0, worst = 0.0;
  while (t < 0.9 * std::sqrt(2.0) * T) {
    st.step(f);
    t += dt;
    const double va = 1.0 / std::tanh(T - t / std::sqrt(2.0));
    if (va < 50.0)
      worst = std::max(worst, std::abs(f.ur[jc] - va));
  }
  CHECK(worst < 2e-4);
}

}  // TEST_SUITE

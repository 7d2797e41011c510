#include "kgdelta/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kgdelta/discretization.hpp"
#include "kgdelta/errors.hpp"
#include "kgdelta/evolution.hpp"
#include "kgdelta/io.hpp"
#include "kgdelta/model.hpp"
#include "kgdelta/spectra.hpp"

namespace kgdelta::commands {

namespace {

using nlohmann::json;

void require_format(const RunConfig& cfg, const char* natural) {
  if (!cfg.format.empty() && cfg.format != natural)
    throw DomainError(std::string("this command emits ") + natural +
                      " only; got --format " + cfg.format);
}

model::WaveSpec spec_from(const RunConfig& cfg) {
  const auto params =
      model::validate_params(cfg.m, cfg.alpha, cfg.gamma, cfg.p);
  return model::make_wave_spec(params, cfg.omega);
}

discretization::Grid grid_from(const RunConfig& cfg,
                               const model::WaveSpec& spec) {
  double L = cfg.grid_L;
  if (!(L > 0.0)) {
    model::require_admissible(spec);
    const double kappa =
        std::sqrt(spec.params.m * spec.params.m - spec.omega * spec.omega);
    L = 30.0 / kappa;
  }
  int N = cfg.grid_N;
  if (N == 0) N = 2 * static_cast<int>(std::ceil(L / 0.01));
  return discretization::make_grid(L, N);
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int sweep_thread_budget(int rows) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("KGDELTA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      budget = std::min<long>(budget, v);
  }
  return std::min(budget, rows);
}

}  // namespace

int cmd_classify(const RunConfig& cfg) {
  require_format(cfg, "json");
  const auto spec = spec_from(cfg);
  json doc;
  doc["beta"] = spec.beta;
  doc["admissible"] = model::admissible(spec);
  if (!model::admissible(spec)) {
    io::write_output(cfg.out, dump(doc));
    return 2;
  }
  const auto sv = model::classify(spec);
  doc["verdict"] = model::to_string(sv.verdict);
  doc["n_omega"] = sv.n_omega;
  doc["slope"] = sv.slope;
  doc["slope_source"] = model::to_string(sv.slope_source);
  doc["evidence"] = sv.evidence;
  io::write_output(cfg.out, dump(doc));
  return 0;
}

int cmd_slope(const RunConfig& cfg) {
  require_format(cfg, "json");
  const auto spec = spec_from(cfg);
  json doc;
  doc["m"] = cfg.m;
  doc["alpha"] = cfg.alpha;
  doc["gamma"] = cfg.gamma;
  doc["p"] = cfg.p;
  doc["omega"] = cfg.omega;
  doc["beta"] = spec.beta;
  doc["admissible"] = model::admissible(spec);
  if (!model::admissible(spec)) {
    io::write_output(cfg.out, dump(doc));
    return 2;
  }
  doc["charge"] = model::charge(spec);
  doc["slope"] = model::charge_slope(spec);
  doc["slope_source"] = model::to_string(
      spec.params.p == 3.0 ? model::SlopeSource::ClosedFormP3
                           : model::SlopeSource::NumericQuadrature);
  io::write_output(cfg.out, dump(doc));
  return 0;
}

int cmd_phase_diagram(const RunConfig& cfg) {
  require_format(cfg, "csv");
  const auto params =
      model::validate_params(cfg.m, cfg.alpha, cfg.gamma, cfg.p);
  if (std::isnan(cfg.omega_min) || std::isnan(cfg.omega_max))
    throw DomainError("phase-diagram needs --omega-min and --omega-max");
  if (!(cfg.omega_max > cfg.omega_min))
    throw DomainError("--omega-max must exceed --omega-min");
  if (cfg.steps < 1) throw DomainError("--steps must be at least 1");

  const int rows = cfg.steps + 1;
  struct Row {
    double omega = 0.0, beta = 0.0, slope = 0.0;
    bool admissible = false, has_verdict = false;
    int n_omega = 0;
    std::string verdict;
  };
  std::vector<Row> table(rows);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < rows; i = next.fetch_add(1)) {
      Row& r = table[i];
      r.omega = cfg.omega_min +
                i * (cfg.omega_max - cfg.omega_min) / cfg.steps;
      const auto spec = model::make_wave_spec(params, r.omega);
      r.beta = spec.beta;
      r.admissible = model::admissible(spec);
      if (!r.admissible) continue;
      try {
        const auto sv = model::classify(spec);
        r.n_omega = sv.n_omega;
        r.slope = sv.slope;
        r.verdict = model::to_string(sv.verdict);
        r.has_verdict = true;
      } catch (const StencilOutOfRange&) {
        // Too close to the admissibility boundary for the slope stencil:
        // leave the verdict cells empty, like an inadmissible row.
      }
    }
  };
  const int n_threads = sweep_thread_budget(rows);
  if (n_threads > 1) {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }

  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows);
  for (const Row& r : table) {
    std::vector<std::string> c;
    c.push_back(io::format_double(r.omega));
    c.push_back(io::format_double(r.beta));
    c.push_back(r.admissible ? "1" : "0");
    c.push_back(r.has_verdict ? std::to_string(r.n_omega) : "");
    c.push_back(r.has_verdict ? io::format_double(r.slope) : "");
    c.push_back(r.verdict);
    cells.push_back(std::move(c));
  }
  std::ostringstream os;
  io::write_csv_rows(os, {"omega", "beta", "admissible", "n_omega", "slope",
                          "verdict"},
                     cells);
  io::write_output(cfg.out, os.str());
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  require_format(cfg, "json");
  const auto spec = spec_from(cfg);
  model::require_admissible(spec);
  const auto grid = grid_from(cfg, spec);

  const auto [n_plus, n_minus] = spectra::count_negative_Lpm(grid, spec);
  const int n_radial = spectra::count_negative_radial(grid, spec);
  const auto kc = spectra::kernel_check(grid, spec);
  const double k2 = spec.params.m * spec.params.m - spec.omega * spec.omega;
  const auto rep =
      spectra::spectrum_below(discretization::build_L_plus(grid, spec), k2,
                              kc.zero_tol, k2, 8);
  const auto edges = spectra::ess_spectrum_edges(spec);

  json doc;
  doc["n_plus"] = n_plus;
  doc["n_minus"] = n_minus;
  doc["n_radial"] = n_radial;
  doc["eigenvalues_below"] = rep.eigenvalues_below;
  doc["zero_mode_correlation"] = kc.l_minus_correlation;
  doc["ess_edges"] = {{"sigma1", edges.sigma1},
                      {"sigma2", edges.sigma2},
                      {"lplus_lminus_edge", k2}};
  io::write_output(cfg.out, dump(doc));
  return 0;
}

int cmd_evolve(const RunConfig& cfg) {
  require_format(cfg, "csv");
  const auto spec = spec_from(cfg);
  model::require_admissible(spec);

  evolution::EvolveConfig ec;
  ec.grid = grid_from(cfg, spec);
  ec.dt = std::isnan(cfg.dt) ? 1e-3 : cfg.dt;
  ec.t_end = std::isnan(cfg.t_end) ? 20.0 : cfg.t_end;
  if (!(ec.dt > 0.0)) throw DomainError("--dt must be positive");
  if (!(ec.t_end > 0.0)) throw DomainError("--t-end must be positive");
  ec.monitor_stride = std::max(
      1, static_cast<int>(std::llround(ec.t_end / ec.dt / 500.0)));

  evolution::PerturbationMode mode;
  if (cfg.mode == "scale")
    mode = evolution::PerturbationMode::Scale;
  else if (cfg.mode == "direction" || cfg.mode == "unstable-direction")
    mode = evolution::PerturbationMode::UnstableDirection;
  else
    throw DomainError("--mode must be scale or direction, got " + cfg.mode);

  const auto rep = evolution::stability_experiment(spec, cfg.eps, mode, ec);
  const auto& ts = rep.series;
  std::ostringstream os;
  io::write_csv(os,
                {"t", "energy", "charge", "orbital_dist", "h_norm",
                 "weighted_norm"},
                {&ts.times, &ts.energy, &ts.charge, &ts.orbital_dist,
                 &ts.h_norm, &ts.weighted_norm},
                evolution::to_string(ts.terminated));
  io::write_output(cfg.out, os.str());
  return ts.terminated == evolution::Termination::SolverFailed ? 3 : 0;
}

int cmd_blowup(const RunConfig& cfg) {
  require_format(cfg, "csv");
  const double T = std::isnan(cfg.t_end) ? 1.0 : cfg.t_end;
  const double dt = std::isnan(cfg.dt) ? 1e-4 : cfg.dt;
  const auto series = evolution::blowup_ode(T, dt);
  std::string status = "completed";
  if (std::isfinite(series.divergence_time))
    status = "diverged divergence_time=" +
             io::format_double(series.divergence_time);
  std::ostringstream os;
  io::write_csv(os, {"t", "v_numeric", "v_analytic", "abs_err"},
                {&series.times, &series.v_numeric, &series.v_analytic,
                 &series.abs_err},
                status);
  io::write_output(cfg.out, os.str());
  return 0;
}

int run_guarded(int (*cmd)(const RunConfig&), const RunConfig& cfg) {
  try {
    return cmd(cfg);
  } catch (const NotAdmissible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SingularSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoContraction& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kgdelta::commands

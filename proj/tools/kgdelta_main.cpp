#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgdelta/commands.hpp"
#include "kgdelta/kernels.hpp"

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Flat key=value config support: values are appended to argv as flags, but
/// only for flags absent from the command line, so flags always win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    std::exit(1);
  }
  std::vector<std::string> merged = args;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: config line is not key=value: " << t << "\n";
      std::exit(1);
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      std::cerr << "error: config line has an empty key: " << t << "\n";
      std::exit(1);
    }
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given) continue;
    merged.push_back(flag);
    merged.push_back(value);
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  using kgdelta::commands::RunConfig;
  namespace cmds = kgdelta::commands;

  CLI::App app{
      "Standing waves of the 1D nonlinear Klein-Gordon equation with point "
      "interactions: construction, stability classification, spectra, and "
      "time integration"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;  // consumed by merge_config before parsing
  int (*selected)(const RunConfig&) = nullptr;

  const auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "mass (> 0)");
    sub->add_option("--alpha", cfg.alpha, "time-derivative point coupling");
    sub->add_option("--gamma", cfg.gamma, "potential point coupling");
    sub->add_option("--p", cfg.p, "nonlinearity exponent (> 1)");
  };
  const auto add_io_flags = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--config", config_path,
                    "flat key=value file; command-line flags win");
  };
  const auto add_grid_flags = [&](CLI::App* sub) {
    sub->add_option("--grid-L", cfg.grid_L,
                    "domain half-length (default: 30/kappa)");
    sub->add_option("--grid-N", cfg.grid_N,
                    "cell count, even (default: spacing 0.01)");
  };

  CLI::App* classify = app.add_subcommand(
      "classify", "stability verdict for one (parameters, omega) point");
  add_model_flags(classify);
  classify->add_option("--omega", cfg.omega, "wave frequency")->required();
  add_io_flags(classify);

  CLI::App* slope = app.add_subcommand(
      "slope", "charge and charge slope at one frequency");
  add_model_flags(slope);
  slope->add_option("--omega", cfg.omega, "wave frequency")->required();
  add_io_flags(slope);

  CLI::App* phase = app.add_subcommand(
      "phase-diagram", "sweep omega and tabulate verdicts");
  add_model_flags(phase);
  phase->add_option("--omega-min", cfg.omega_min, "sweep start")->required();
  phase->add_option("--omega-max", cfg.omega_max, "sweep end")->required();
  phase->add_option("--steps", cfg.steps, "number of sweep intervals")
      ->required();
  add_io_flags(phase);

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "negative counts, kernel diagnostics, essential edges");
  add_model_flags(spectrum);
  spectrum->add_option("--omega", cfg.omega, "wave frequency")->required();
  add_grid_flags(spectrum);
  add_io_flags(spectrum);

  CLI::App* evolve = app.add_subcommand(
      "evolve", "integrate a (perturbed) standing wave and monitor it");
  add_model_flags(evolve);
  evolve->add_option("--omega", cfg.omega, "wave frequency")->required();
  add_grid_flags(evolve);
  evolve->add_option("--dt", cfg.dt, "time step (default 1e-3)");
  evolve->add_option("--t-end", cfg.t_end, "horizon (default 20)");
  evolve->add_option("--eps", cfg.eps, "perturbation size (default 0)");
  evolve->add_option("--mode", cfg.mode, "perturbation: scale | direction")
      ->check(CLI::IsMember({"scale", "direction", "unstable-direction"}));
  add_io_flags(evolve);

  CLI::App* blowup = app.add_subcommand(
      "blowup", "blow-up ODE branch vs its analytic solution");
  blowup->add_option("--t-end", cfg.t_end,
                     "branch parameter T; divergence at sqrt(2) T (default 1)");
  blowup->add_option("--dt", cfg.dt, "time step (default 1e-4)");
  add_io_flags(blowup);

  classify->callback([&] { selected = cmds::cmd_classify; });
  slope->callback([&] { selected = cmds::cmd_slope; });
  phase->callback([&] { selected = cmds::cmd_phase_diagram; });
  spectrum->callback([&] { selected = cmds::cmd_spectrum; });
  evolve->callback([&] { selected = cmds::cmd_evolve; });
  blowup->callback([&] { selected = cmds::cmd_blowup; });

  std::vector<std::string> args(argv + 1, argv + argc);
  args = merge_config(args);
  // CLI11 consumes arguments in reverse.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return cmds::run_guarded(selected, cfg);
}

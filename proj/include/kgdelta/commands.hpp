#pragma once

#include <limits>
#include <string>

namespace kgdelta::commands {

/// Flag values shared by the subcommands. NaN / 0 sentinels mean "not
/// provided"; each command fills in its own defaults.
struct RunConfig {
  double m = 1.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double p = 3.0;
  double omega = 0.0;
  double omega_min = std::numeric_limits<double>::quiet_NaN();
  double omega_max = std::numeric_limits<double>::quiet_NaN();
  int steps = 0;
  double grid_L = 0.0;  ///< 0: 30 / kappa
  int grid_N = 0;       ///< 0: spacing near 0.01
  double dt = std::numeric_limits<double>::quiet_NaN();
  double t_end = std::numeric_limits<double>::quiet_NaN();
  double eps = 0.0;
  std::string mode = "scale";
  std::string out;     ///< empty: stdout
  std::string format;  ///< empty: command default
};

int cmd_classify(const RunConfig& cfg);
int cmd_phase_diagram(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_blowup(const RunConfig& cfg);
int cmd_slope(const RunConfig& cfg);

/// Runs a command under the exit-code contract: 0 success, 1 usage or domain
/// error, 2 not admissible, 3 solver failure. Error messages go to stderr.
int run_guarded(int (*cmd)(const RunConfig&), const RunConfig& cfg);

}  // namespace kgdelta::commands

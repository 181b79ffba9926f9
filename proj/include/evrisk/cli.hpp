#pragma once

#include <optional>
#include <string>
#include <vector>

namespace evrisk {

/// Everything the command line can set. Numeric defaults match the
/// library's documented method constants.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  double lambda = 0.01;
  double step = 0.025;
  int padding = 0;
  double prominence = 0.05;
  double convexest_offset = 0.0;  // moneyness units; 0 = one grid step
  int strangle_width = 2;
  bool strangle_delta_neutral = false;
  std::string filter = "definition";  // or "convexest"
  std::string quantile = "type7";     // linear-interpolation quantiles
  std::optional<double> rate_override;
  int jobs = 1;
};

/// `fit`: one fitted-smile CSV + JSON sidecar per snapshot, plus a density
/// CSV when the fit is arbitrage-free. Returns 0, or 2 when any fit ended
/// at the lambda floor without a nonnegative density.
[[nodiscard]] int cmd_fit(const RunConfig& config);

/// `analyze`: evaluates every complete before/after event study and writes
/// results.csv, summary_<metric>.csv, report.md and report.json.
[[nodiscard]] int cmd_analyze(const RunConfig& config);

/// `plot`: renders one SVG per fitted-smile CSV previously written by
/// `fit` (density panel included when the sibling density CSV exists).
[[nodiscard]] int cmd_plot(const RunConfig& config);

/// Full argv entry point (subcommand dispatch, flag parsing, error
/// reporting). Returns the process exit code: 0 success, 2 when outputs
/// were produced but some fit was not arbitrage-free, 1 on hard error.
[[nodiscard]] int run_cli(int argc, const char* const* argv);

/// Convenience for in-process driving: args exclude the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args);

}  // namespace evrisk

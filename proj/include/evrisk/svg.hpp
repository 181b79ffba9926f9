#pragma once

#include <string>
#include <vector>

namespace evrisk {

/// Everything one figure needs; plain data so the plot command can be fed
/// straight from previously written CSV artifacts.
struct PlotData {
  std::string title;
  std::vector<double> moneyness;        // full grid
  std::vector<double> fitted_iv;        // aligned with moneyness
  std::vector<double> observed_m;       // marker positions
  std::vector<double> observed_iv;
  std::vector<double> density_m;        // interior nodes; may be empty
  std::vector<double> probability;      // aligned with density_m
  std::vector<char> is_mode;            // aligned with density_m
};

/// Two-panel figure (fitted smile over observed points, density bars with
/// modes highlighted). Output is byte-stable: fixed canvas, fixed decimals,
/// no timestamps.
[[nodiscard]] std::string render_snapshot_svg(const PlotData& data);

}  // namespace evrisk

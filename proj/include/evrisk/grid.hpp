#pragma once

#include <vector>

#include "evrisk/chain.hpp"

namespace evrisk {

/// Uniform moneyness grid m_j = m0 + j*step, j = 0..count-1.
/// count >= 5 so the pentadiagonal stencil fits.
struct MoneynessGrid {
  double m0 = 0.0;
  double step = 0.0;
  int count = 0;

  [[nodiscard]] double node(int j) const { return m0 + j * step; }
  [[nodiscard]] std::vector<double> nodes() const;

  /// Index of the node nearest moneyness 1.0; ties break to the lower index.
  [[nodiscard]] int atm_index() const;
};

struct GridMap {
  MoneynessGrid grid;
  std::vector<int> node_of_obs;  // same order as the observation list
};

/// Maps each observation to its nearest node. Throws StepTooCoarse when an
/// observation sits farther than step/2 from every node and CollisionError
/// when two observations land on the same node.
[[nodiscard]] std::vector<int> map_to_grid(
    const MoneynessGrid& grid, const std::vector<IvObservation>& observations);

/// Builds the grid spanning [min obs − padding·step, max obs + padding·step]
/// and maps the observations onto it. Throws GridTooSmall when fewer than
/// 5 nodes result.
[[nodiscard]] GridMap build_grid(const std::vector<IvObservation>& observations,
                                 double step, int padding);

}  // namespace evrisk

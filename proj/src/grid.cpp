#include "evrisk/grid.hpp"

#include <cmath>
#include <string>

#include "evrisk/errors.hpp"

namespace evrisk {

std::vector<double> MoneynessGrid::nodes() const {
  std::vector<double> out(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) out[static_cast<size_t>(j)] = node(j);
  return out;
}

int MoneynessGrid::atm_index() const {
  int best = 0;
  double best_dist = std::abs(node(0) - 1.0);
  for (int j = 1; j < count; ++j) {
    const double dist = std::abs(node(j) - 1.0);
    if (dist < best_dist) {  // strict: ties keep the lower index
      best = j;
      best_dist = dist;
    }
  }
  return best;
}

std::vector<int> map_to_grid(const MoneynessGrid& grid,
                             const std::vector<IvObservation>& observations) {
  // Half-step snapping tolerance, with a one-ulp cushion so observations
  // generated as node values never fail the boundary comparison.
  const double tol = grid.step / 2.0 * (1.0 + 1e-12);
  std::vector<int> nodes(observations.size());
  std::vector<char> taken(static_cast<size_t>(grid.count), 0);
  for (size_t i = 0; i < observations.size(); ++i) {
    const double m = observations[i].moneyness;
    int j = static_cast<int>(std::lround((m - grid.m0) / grid.step));
    if (j < 0) j = 0;
    if (j >= grid.count) j = grid.count - 1;
    if (std::abs(m - grid.node(j)) > tol) {
      throw StepTooCoarse("observation moneyness " + std::to_string(m) +
                          " farther than step/2 from every grid node");
    }
    if (taken[static_cast<size_t>(j)]) {
      throw CollisionError("observations at moneyness " + std::to_string(m) +
                           " and an earlier one both snap to node " +
                           std::to_string(j));
    }
    taken[static_cast<size_t>(j)] = 1;
    nodes[i] = j;
  }
  return nodes;
}

GridMap build_grid(const std::vector<IvObservation>& observations, double step,
                   int padding) {
  if (observations.empty()) throw GridTooSmall("no observations");
  if (!(step > 0.0)) throw GridTooSmall("step must be positive");
  if (padding < 0) throw GridTooSmall("padding must be nonnegative");

  double lo = observations.front().moneyness;
  double hi = lo;
  for (const auto& o : observations) {
    lo = std::min(lo, o.moneyness);
    hi = std::max(hi, o.moneyness);
  }

  GridMap out;
  out.grid.step = step;
  out.grid.m0 = lo - padding * step;
  const int span = static_cast<int>(std::lround((hi - lo) / step));
  out.grid.count = span + 1 + 2 * padding;
  if (out.grid.count < 5) {
    throw GridTooSmall("grid would have " + std::to_string(out.grid.count) +
                       " nodes; the fitter needs at least 5 (widen padding)");
  }
  out.node_of_obs = map_to_grid(out.grid, observations);
  return out;
}

}  // namespace evrisk

#include "evrisk/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evrisk/errors.hpp"
#include "evrisk/smile_fit.hpp"

namespace evrisk {

std::vector<double> raw_density(const MoneynessGrid& grid,
                                const std::vector<double>& sigma,
                                const MarketParams& market) {
  if (sigma.size() != static_cast<size_t>(grid.count)) {
    throw InvariantViolation("raw_density: sigma length != grid count");
  }
  if (grid.count < 3) {
    throw GridTooSmall("density needs at least 3 nodes");
  }
  std::vector<double> call(static_cast<size_t>(grid.count));
  for (int j = 0; j < grid.count; ++j) {
    call[static_cast<size_t>(j)] =
        call_price({.spot = market.spot,
                    .strike = grid.node(j) * market.spot,
                    .sigma = sigma[static_cast<size_t>(j)],
                    .tau = market.tau,
                    .rate = market.rate});
  }
  const double strike_step = grid.step * market.spot;
  const double growth = std::exp(market.rate * market.tau);
  std::vector<double> out(static_cast<size_t>(grid.count - 2));
  for (int j = 1; j + 1 < grid.count; ++j) {
    const double second_diff = call[static_cast<size_t>(j - 1)] +
                               call[static_cast<size_t>(j + 1)] -
                               2.0 * call[static_cast<size_t>(j)];
    out[static_cast<size_t>(j - 1)] = growth * second_diff / (strike_step * strike_step);
  }
  return out;
}

RiskNeutralDensity extract_density(const MoneynessGrid& grid,
                                   const std::vector<double>& sigma,
                                   const MarketParams& market) {
  RiskNeutralDensity density;
  density.grid = grid;
  density.raw = raw_density(grid, sigma, market);
  double sum = 0.0;
  for (double g : density.raw) sum += g;
  if (!(sum > 0.0)) {
    throw DegenerateDensity("raw density sums to " + std::to_string(sum));
  }
  density.probabilities.resize(density.raw.size());
  for (size_t k = 0; k < density.raw.size(); ++k) {
    density.probabilities[k] = density.raw[k] / sum;
  }
  density.modes = detect_modes(density, kDefaultProminence);
  return density;
}

RiskNeutralDensity extract_density(const FittedSmile& smile,
                                   const MarketParams& market) {
  return extract_density(smile.grid, smile.sigma, market);
}

std::vector<Mode> detect_modes(const RiskNeutralDensity& density,
                               double prominence) {
  const std::vector<double>& p = density.probabilities;
  std::vector<Mode> modes;
  if (p.size() < 3) return modes;
  const double max_p = *std::max_element(p.begin(), p.end());
  if (!(max_p > 0.0)) return modes;

  // Walk downhill from index `from` one step at a time; the value where the
  // non-increasing run ends (or the array edge) is the flanking valley floor.
  auto valley = [&p](size_t from, int dir) {
    size_t k = from;
    while (true) {
      if (dir < 0 && k == 0) break;
      if (dir > 0 && k + 1 == p.size()) break;
      const size_t next = dir < 0 ? k - 1 : k + 1;
      if (p[next] > p[k]) break;
      k = next;
    }
    return p[k];
  };

  size_t i = 0;
  while (i < p.size()) {
    size_t j = i;
    while (j + 1 < p.size() && p[j + 1] == p[i]) ++j;  // plateau [i..j]
    const bool rises_left = i > 0 && p[i - 1] < p[i];
    const bool falls_right = j + 1 < p.size() && p[j + 1] < p[j];
    if (rises_left && falls_right) {
      const double floor = std::max(valley(i, -1), valley(j, +1));
      const double prom = (p[i] - floor) / max_p;
      if (prom >= prominence) {
        // Probability index k corresponds to full-grid node k+1.
        modes.push_back({static_cast<int>(i) + 1, p[i], prom});
      }
    }
    i = j + 1;
  }
  return modes;
}

}  // namespace evrisk

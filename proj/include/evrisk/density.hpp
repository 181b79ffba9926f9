#pragma once

#include <vector>

#include "evrisk/grid.hpp"
#include "evrisk/pricing.hpp"

namespace evrisk {

struct FittedSmile;

inline constexpr double kDefaultProminence = 0.05;

/// Local maximum of the normalized density. node indexes the FULL grid;
/// prominence is height above the higher flanking valley floor, as a
/// fraction of the maximum probability.
struct Mode {
  int node = 0;
  double probability = 0.0;
  double prominence = 0.0;
};

/// Finite-difference risk-neutral density over the grid's interior nodes
/// (1..count-2). probabilities[k] belongs to grid node k+1.
struct RiskNeutralDensity {
  MoneynessGrid grid;
  std::vector<double> raw;            // discounted second differences, 1/currency
  std::vector<double> probabilities;  // raw normalized by its sum
  std::vector<Mode> modes;            // at kDefaultProminence
};

/// Discounted call-price second differences at interior nodes:
/// e^{r tau} (C_{j-1} + C_{j+1} - 2 C_j) / (step*spot)^2.
/// sigma may contain zeros (intrinsic prices); negatives throw DomainError.
[[nodiscard]] std::vector<double> raw_density(const MoneynessGrid& grid,
                                              const std::vector<double>& sigma,
                                              const MarketParams& market);

/// Normalizes raw values (negatives preserved) into probabilities and
/// detects modes at the default prominence. Throws DegenerateDensity when
/// the raw values sum to <= 0.
[[nodiscard]] RiskNeutralDensity extract_density(const MoneynessGrid& grid,
                                                 const std::vector<double>& sigma,
                                                 const MarketParams& market);

[[nodiscard]] RiskNeutralDensity extract_density(const FittedSmile& smile,
                                                 const MarketParams& market);

/// Interior local maxima of the probability vector with prominence >=
/// threshold (fraction of max probability). Plateau maxima count once, at
/// their left edge. Sorted by node index.
[[nodiscard]] std::vector<Mode> detect_modes(const RiskNeutralDensity& density,
                                             double prominence);

}  // namespace evrisk

#pragma once

#include <string>
#include <vector>

#include "evrisk/smile_fit.hpp"

namespace evrisk {

enum class ShapeLabel { InverseU, WShape, Convex, Indeterminate };

[[nodiscard]] std::string shape_label_name(ShapeLabel label);

/// Maximal run of grid nodes with negative curvature around ATM;
/// empty (first > last) when curvature at ATM is nonnegative.
struct NodeRange {
  int first = 0;
  int last = -1;
  [[nodiscard]] bool empty() const { return first > last; }
};

struct ShapeReport {
  bool is_concave = false;
  ShapeLabel label = ShapeLabel::Convex;
  double convexest = 0.0;        // at the configured offset (default one step)
  double atm_second_diff = 0.0;  // D_atm = sigma[a-1] - 2 sigma[a] + sigma[a+1]
  NodeRange concave_window;
};

/// Concavity verdict per the near-ATM definition: second differences
/// negative across {ATM-1, ATM, ATM+1} AND that window strictly inside the
/// open interval (second-lowest observed node, second-highest observed
/// node). Concave smiles are labeled by the number of fitted-curve local
/// maxima strictly inside the observed span: 1 = InverseU, 2 = WShape,
/// otherwise Indeterminate; non-concave smiles are labeled Convex.
/// Throws TooFewObservations below 4 observed nodes or 5 grid nodes.
[[nodiscard]] ShapeReport classify_shape(const FittedSmile& smile,
                                         const std::vector<int>& observed_nodes,
                                         double convexest_offset);

[[nodiscard]] ShapeReport classify_shape(const FittedSmile& smile,
                                         const std::vector<int>& observed_nodes);

/// sigma(ATM-x) + sigma(ATM+x) - 2*sigma(ATM); x must be a whole number of
/// grid steps and ATM±x must stay on the grid (OffGridOffset otherwise).
[[nodiscard]] double convexest(const FittedSmile& smile, double x);

}  // namespace evrisk

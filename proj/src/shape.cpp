#include "evrisk/shape.hpp"

#include <algorithm>
#include <cmath>

#include "evrisk/errors.hpp"

namespace evrisk {

namespace {

double second_diff(const std::vector<double>& s, int j) {
  return s[static_cast<size_t>(j - 1)] - 2.0 * s[static_cast<size_t>(j)] +
         s[static_cast<size_t>(j + 1)];
}

/// Local maxima of sigma at nodes strictly inside (lo, hi); a plateau
/// counts once, at its left edge.
int count_peaks(const std::vector<double>& s, int lo, int hi) {
  int peaks = 0;
  int j = lo + 1;
  while (j < hi) {
    int k = j;
    while (k + 1 < hi && s[static_cast<size_t>(k + 1)] == s[static_cast<size_t>(j)]) ++k;
    const bool rises = s[static_cast<size_t>(j - 1)] < s[static_cast<size_t>(j)];
    const bool falls = s[static_cast<size_t>(k + 1)] < s[static_cast<size_t>(k)];
    if (rises && falls) ++peaks;
    j = k + 1;
  }
  return peaks;
}

}  // namespace

std::string shape_label_name(ShapeLabel label) {
  switch (label) {
    case ShapeLabel::InverseU: return "InverseU";
    case ShapeLabel::WShape: return "WShape";
    case ShapeLabel::Convex: return "Convex";
    case ShapeLabel::Indeterminate: return "Indeterminate";
  }
  return "?";
}

double convexest(const FittedSmile& smile, double x) {
  const double steps = x / smile.grid.step;
  const long k = std::lround(steps);
  if (std::abs(steps - static_cast<double>(k)) > 1e-9 || k < 1) {
    throw OffGridOffset("offset " + std::to_string(x) +
                        " is not a positive whole number of grid steps");
  }
  const int a = smile.grid.atm_index();
  if (a - k < 0 || a + k >= smile.grid.count) {
    throw OffGridOffset("ATM ± offset leaves the grid");
  }
  const auto& s = smile.sigma;
  return s[static_cast<size_t>(a - k)] + s[static_cast<size_t>(a + k)] -
         2.0 * s[static_cast<size_t>(a)];
}

ShapeReport classify_shape(const FittedSmile& smile,
                           const std::vector<int>& observed_nodes,
                           double convexest_offset) {
  const int n = smile.grid.count;
  if (n < 5) throw TooFewObservations("grid has fewer than 5 nodes");
  if (observed_nodes.size() < 4) {
    throw TooFewObservations(
        "need at least 4 observed nodes for the second-lowest/second-highest "
        "window bounds");
  }
  std::vector<int> obs = observed_nodes;
  std::sort(obs.begin(), obs.end());

  const int a = smile.grid.atm_index();
  ShapeReport report;
  // convexest() rejects an ATM node at the grid edge, which also guards the
  // second-difference reads below.
  report.convexest = convexest(smile, convexest_offset);
  report.atm_second_diff = second_diff(smile.sigma, a);

  const bool window_on_grid = a - 1 >= 1 && a + 1 <= n - 2;
  bool window_negative = false;
  if (window_on_grid) {
    window_negative = second_diff(smile.sigma, a - 1) < 0.0 &&
                      report.atm_second_diff < 0.0 &&
                      second_diff(smile.sigma, a + 1) < 0.0;
  }
  const bool inside = obs[1] < a - 1 && a + 1 < obs[obs.size() - 2];
  report.is_concave = window_negative && inside;

  if (window_on_grid && report.atm_second_diff < 0.0) {
    int lo = a, hi = a;
    while (lo - 1 >= 1 && second_diff(smile.sigma, lo - 1) < 0.0) --lo;
    while (hi + 1 <= n - 2 && second_diff(smile.sigma, hi + 1) < 0.0) ++hi;
    report.concave_window = {lo, hi};
  }

  if (!report.is_concave) {
    report.label = ShapeLabel::Convex;
  } else {
    const int peaks = count_peaks(smile.sigma, obs.front(), obs.back());
    if (peaks == 1) report.label = ShapeLabel::InverseU;
    else if (peaks == 2) report.label = ShapeLabel::WShape;
    else report.label = ShapeLabel::Indeterminate;
  }
  return report;
}

ShapeReport classify_shape(const FittedSmile& smile,
                           const std::vector<int>& observed_nodes) {
  return classify_shape(smile, observed_nodes, smile.grid.step);
}

}  // namespace evrisk

#include "evrisk/smile_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evrisk/density.hpp"
#include "evrisk/errors.hpp"

namespace evrisk {

// ============================================================
// system assembly
// ============================================================

void validate_config(const FitConfig& config) {
  if (!(config.lambda > 0.0) || !(config.lambda_floor > 0.0) ||
      !(config.lambda_floor <= config.lambda)) {
    throw InvariantViolation("FitConfig: need 0 < lambda_floor <= lambda");
  }
  if (!(config.reduction_factor > 0.0) || !(config.reduction_factor < 1.0)) {
    throw InvariantViolation("FitConfig: reduction_factor must be in (0,1)");
  }
  if (config.density_tolerance < 0.0) {
    throw InvariantViolation("FitConfig: density_tolerance must be >= 0");
  }
}

BandedSystem assemble_foc_system(const MoneynessGrid& grid,
                                 const std::map<int, double>& observed,
                                 double lambda) {
  const int n = grid.count;
  if (n < 5) {
    throw GridTooSmall("FOC system needs at least 5 nodes, grid has " +
                       std::to_string(n));
  }
  if (observed.empty()) {
    throw InvariantViolation("assemble_foc_system: no observed nodes");
  }
  for (const auto& [node, iv] : observed) {
    if (node < 0 || node >= n) {
      throw InvariantViolation("observed node " + std::to_string(node) +
                               " outside grid");
    }
    (void)iv;
  }

  BandedSystem sys;
  sys.n = n;
  sys.rows.assign(static_cast<size_t>(n), {0.0, 0.0, 0.0, 0.0, 0.0});
  sys.rhs.assign(static_cast<size_t>(n), 0.0);

  // Interior stencil (1,-4,6,-4,1); boundary rows fold the clamp
  // sigma_{-1} = sigma_{-2} = sigma_0 (and mirrored at the top).
  for (int j = 0; j < n; ++j) {
    auto& r = sys.rows[static_cast<size_t>(j)];
    if (j == 0) {
      r[2] = 3.0; r[3] = -4.0; r[4] = 1.0;
    } else if (j == 1) {
      r[1] = -3.0; r[2] = 6.0; r[3] = -4.0; r[4] = 1.0;
    } else if (j == n - 2) {
      r[0] = 1.0; r[1] = -4.0; r[2] = 6.0; r[3] = -3.0;
    } else if (j == n - 1) {
      r[0] = 1.0; r[1] = -4.0; r[2] = 3.0;
    } else {
      r[0] = 1.0; r[1] = -4.0; r[2] = 6.0; r[3] = -4.0; r[4] = 1.0;
    }
  }

  const double step4 = grid.step * grid.step * grid.step * grid.step;
  const double weight =
      lambda * n / (static_cast<double>(observed.size()) * step4);
  for (const auto& [node, iv] : observed) {
    sys.rows[static_cast<size_t>(node)][2] += weight;
    sys.rhs[static_cast<size_t>(node)] = weight * iv;
  }
  return sys;
}

// ============================================================
// banded LU solve
// ============================================================

std::vector<double> solve_banded(const BandedSystem& system) {
  const int n = system.n;
  if (n <= 0 || system.rows.size() != static_cast<size_t>(n) ||
      system.rhs.size() != static_cast<size_t>(n)) {
    throw SingularSystem("malformed banded system");
  }
  constexpr int kBand = 2;           // sub/superdiagonals in the input
  constexpr int kWidth = 3 * kBand + 1;  // room for pivoting fill-in

  // work[i][c] = A[i, i-kBand+c]
  std::vector<std::array<double, kWidth>> work(static_cast<size_t>(n));
  std::vector<double> rhs = system.rhs;
  for (int i = 0; i < n; ++i) {
    work[static_cast<size_t>(i)].fill(0.0);
    for (int c = 0; c < 5; ++c) {
      const int col = i - kBand + c;
      if (col < 0 || col >= n) continue;
      work[static_cast<size_t>(i)][static_cast<size_t>(c)] =
          system.rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
    }
  }

  auto entry = [&](int r, int col) -> double& {
    return work[static_cast<size_t>(r)][static_cast<size_t>(col - r + kBand)];
  };

  for (int k = 0; k < n; ++k) {
    const int last_row = std::min(k + kBand, n - 1);
    int pivot_row = k;
    double pivot_mag = std::abs(entry(k, k));
    for (int r = k + 1; r <= last_row; ++r) {
      const double mag = std::abs(entry(r, k));
      if (mag > pivot_mag) {
        pivot_row = r;
        pivot_mag = mag;
      }
    }
    // Exactly-zero pivots flag structural singularity; near-singular
    // systems instead fail the caller's backward-residual certificate,
    // since any pivot threshold relative to the global matrix scale
    // misfires when row scales differ by many orders (huge lambda).
    if (pivot_mag == 0.0) {
      throw SingularSystem("zero pivot at column " + std::to_string(k));
    }
    const int last_col = std::min(k + 2 * kBand, n - 1);
    if (pivot_row != k) {
      for (int col = k; col <= last_col; ++col) {
        std::swap(entry(k, col), entry(pivot_row, col));
      }
      std::swap(rhs[static_cast<size_t>(k)], rhs[static_cast<size_t>(pivot_row)]);
    }
    const double pivot = entry(k, k);
    for (int r = k + 1; r <= last_row; ++r) {
      const double mult = entry(r, k) / pivot;
      if (mult == 0.0) continue;
      entry(r, k) = 0.0;
      for (int col = k + 1; col <= last_col; ++col) {
        entry(r, col) -= mult * entry(k, col);
      }
      rhs[static_cast<size_t>(r)] -= mult * rhs[static_cast<size_t>(k)];
    }
  }

  std::vector<double> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double acc = rhs[static_cast<size_t>(i)];
    const int last_col = std::min(i + 2 * kBand, n - 1);
    for (int col = i + 1; col <= last_col; ++col) {
      acc -= entry(i, col) * x[static_cast<size_t>(col)];
    }
    x[static_cast<size_t>(i)] = acc / entry(i, i);
  }
  return x;
}

// ============================================================
// lambda loop
// ============================================================

namespace {

double scaled_residual_norm(const BandedSystem& sys,
                            const std::vector<double>& sigma) {
  double worst = 0.0;
  for (int j = 0; j < sys.n; ++j) {
    double dot = 0.0;
    double scale = std::abs(sys.rhs[static_cast<size_t>(j)]);
    for (int c = 0; c < 5; ++c) {
      const int col = j - 2 + c;
      if (col < 0 || col >= sys.n) continue;
      const double a = sys.rows[static_cast<size_t>(j)][static_cast<size_t>(c)];
      dot += a * sigma[static_cast<size_t>(col)];
      scale += std::abs(a * sigma[static_cast<size_t>(col)]);
    }
    const double res = std::abs(dot - sys.rhs[static_cast<size_t>(j)]);
    worst = std::max(worst, res / std::max(1.0, scale));
  }
  return worst;
}

}  // namespace

FittedSmile fit_observations(const MoneynessGrid& grid,
                             const std::vector<int>& nodes,
                             const std::vector<double>& ivs,
                             const MarketParams& market,
                             const FitConfig& config) {
  validate_config(config);
  if (nodes.size() != ivs.size()) {
    throw InvariantViolation("fit_observations: nodes/ivs length mismatch");
  }
  std::map<int, double> observed;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!observed.emplace(nodes[i], ivs[i]).second) {
      throw CollisionError("duplicate observed node " +
                           std::to_string(nodes[i]));
    }
  }

  double lambda = config.lambda;
  int reductions = 0;
  BandedSystem sys;
  std::vector<double> sigma;
  bool clean = false;
  for (;;) {
    sys = assemble_foc_system(grid, observed, lambda);
    sigma = solve_banded(sys);
    const bool positive =
        std::all_of(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; });
    if (positive) {
      const std::vector<double> raw = raw_density(grid, sigma, market);
      const double low = *std::min_element(raw.begin(), raw.end());
      clean = low >= -config.density_tolerance;
    } else {
      clean = false;  // cannot even price; keep smoothing
    }
    if (clean || lambda <= config.lambda_floor) break;
    lambda = std::max(lambda * config.reduction_factor, config.lambda_floor);
    ++reductions;
  }

  FittedSmile fit;
  fit.grid = grid;
  fit.sigma = std::move(sigma);
  fit.lambda_used = lambda;
  fit.arbitrage_free = clean;
  fit.reductions = reductions;
  double max_iv = 0.0;
  for (const auto& [node, iv] : observed) {
    fit.observed_nodes.push_back(node);
    fit.observed_iv.push_back(iv);
    fit.residuals.push_back(fit.sigma[static_cast<size_t>(node)] - iv);
    max_iv = std::max(max_iv, std::abs(iv));
  }
  for (double s : fit.sigma) {
    if (!(s > 0.0)) {
      throw InvariantViolation("fit produced nonpositive IV " +
                               std::to_string(s) + " at lambda " +
                               std::to_string(lambda));
    }
  }
  fit.foc_residual_norm = scaled_residual_norm(sys, fit.sigma);
  if (fit.foc_residual_norm > 1e-8 * std::max(1.0, max_iv)) {
    throw SingularSystem("stationarity residual " +
                         std::to_string(fit.foc_residual_norm) +
                         " exceeds certificate bound");
  }
  return fit;
}

FittedSmile fit_smile(const ChainSnapshot& snapshot, const MoneynessGrid& grid,
                      const FitConfig& config) {
  const std::vector<int> nodes = map_to_grid(grid, snapshot.observations);
  std::vector<double> ivs(snapshot.observations.size());
  for (size_t i = 0; i < ivs.size(); ++i) ivs[i] = snapshot.observations[i].iv;
  const MarketParams market{snapshot.spot, snapshot.rate, snapshot.tau()};
  return fit_observations(grid, nodes, ivs, market, config);
}

}  // namespace evrisk

#pragma once

#include <array>
#include <map>
#include <vector>

#include "evrisk/chain.hpp"
#include "evrisk/grid.hpp"
#include "evrisk/pricing.hpp"

namespace evrisk {

struct FitConfig {
  double lambda = 0.01;            // smoothness/fit trade-off, > 0
  double lambda_floor = 1e-8;      // reduction loop stops here
  double reduction_factor = 0.5;   // multiplicative decrement, in (0,1)
  double density_tolerance = 0.0;  // nonnegativity slack, >= 0
};

void validate_config(const FitConfig& config);

/// Pentadiagonal system A·sigma = b. rows[j][c] holds A[j, j-2+c],
/// c in [0,5); entries outside the matrix are zero.
struct BandedSystem {
  int n = 0;
  std::vector<std::array<double, 5>> rows;
  std::vector<double> rhs;

  [[nodiscard]] double at(int r, int c) const {
    const int off = c - r + 2;
    return (off >= 0 && off < 5) ? rows[static_cast<size_t>(r)][static_cast<size_t>(off)] : 0.0;
  }
};

/// First-order conditions of the penalized least-squares objective.
/// Unobserved rows carry the (1,-4,6,-4,1) stencil with zero RHS; the
/// boundary clamp (sigma_{-1} = sigma_{-2} = sigma_0 and the mirrored top)
/// folds rows 0,1,J-1,J; observed rows add lambda*(J+1)/(I*step^4) to the
/// diagonal and the same weight times the observed IV to the RHS.
[[nodiscard]] BandedSystem assemble_foc_system(
    const MoneynessGrid& grid, const std::map<int, double>& observed,
    double lambda);

/// Banded LU with partial pivoting. Throws SingularSystem.
[[nodiscard]] std::vector<double> solve_banded(const BandedSystem& system);

/// Result of one smile fit. When the lambda loop reaches its floor with the
/// density still negative the fit is returned with arbitrage_free = false
/// rather than thrown, so downstream reports can surface it.
struct FittedSmile {
  MoneynessGrid grid;
  std::vector<double> sigma;        // fitted IV per node, all > 0
  double lambda_used = 0.0;
  std::vector<int> observed_nodes;  // ascending node indices
  std::vector<double> observed_iv;  // input IVs aligned with observed_nodes
  std::vector<double> residuals;    // sigma[node] - observed_iv, aligned
  double foc_residual_norm = 0.0;   // row-scaled stationarity residual
  bool arbitrage_free = true;
  int reductions = 0;               // lambda-loop iterations taken
};

/// Core fitter on node-level observations (parallel vectors, ascending
/// unique nodes). Solves the FOCs at config.lambda, extracts the density,
/// and halves lambda (down to lambda_floor) until the density clears
/// -density_tolerance.
[[nodiscard]] FittedSmile fit_observations(const MoneynessGrid& grid,
                                           const std::vector<int>& nodes,
                                           const std::vector<double>& ivs,
                                           const MarketParams& market,
                                           const FitConfig& config);

/// Convenience wrapper: maps snapshot observations onto the grid and fits.
[[nodiscard]] FittedSmile fit_smile(const ChainSnapshot& snapshot,
                                    const MoneynessGrid& grid,
                                    const FitConfig& config);

}  // namespace evrisk

#pragma once

#include <string>
#include <vector>

#include "evrisk/chain.hpp"
#include "evrisk/density.hpp"
#include "evrisk/shape.hpp"
#include "evrisk/smile_fit.hpp"

namespace evrisk {

/// Delta-neutral ATM straddle at formation.
/// w solves w*(Dc/C) + (1-w)*(Dp/P) = 0; impmove = (C+P)/S.
struct StraddlePosition {
  double strike = 0.0;
  double w = 0.0;
  double call_entry = 0.0;
  double put_entry = 0.0;
  double call_delta = 0.0;
  double put_delta = 0.0;
  double impmove = 0.0;
};

/// OTM put + OTM call at ATM -/+ width grid steps.
struct StranglePosition {
  double put_strike = 0.0;
  double call_strike = 0.0;
  double put_entry = 0.0;
  double call_entry = 0.0;
  double put_delta = 0.0;
  double call_delta = 0.0;
  double cost_ratio = 0.0;  // (C_otm + P_otm) / S
};

struct StrategyOutcome {
  std::string ticker;
  std::string quarter;
  bool is_concave = false;
  ShapeLabel label = ShapeLabel::Convex;
  double convexest = 0.0;
  double impmove_straddle = 0.0;
  double impmove_strangle = 0.0;
  double straddle_return = 0.0;
  double strangle_return = 0.0;
  double price_return = 0.0;  // ln(S_after / S_before)
  double lambda_used = 0.0;   // before-smile fit
  int modality = 0;           // before-smile density modes
  bool arbitrage_free = true; // both fits stayed arbitrage-free
  std::vector<std::string> warnings;
};

struct EvalConfig {
  FitConfig fit;
  double prominence = kDefaultProminence;
  double convexest_offset = 0.0;  // 0 = one grid step
  int strangle_width = 2;         // grid steps each side of ATM
  bool strangle_delta_neutral = false;
  double grid_step = 0.025;
  int grid_padding = 0;
};

[[nodiscard]] StraddlePosition form_straddle(const ChainSnapshot& before,
                                             const FittedSmile& smile);

/// Eq-style weighted return w*Rc + (1-w)*Rp with holding-period leg
/// returns Rc = exit/entry - 1.
[[nodiscard]] double straddle_return(const StraddlePosition& position,
                                     double exit_call, double exit_put);

[[nodiscard]] StranglePosition form_strangle(const ChainSnapshot& before,
                                             const FittedSmile& smile,
                                             int width_steps);

/// Equal-dollar (Rc+Rp)/2 by default; delta_neutral reuses the straddle
/// weight formula with the OTM deltas.
[[nodiscard]] double strangle_return(const StranglePosition& position,
                                     double exit_call, double exit_put,
                                     bool delta_neutral);

/// Full before -> after evaluation of one event: fit the before smile,
/// classify it, open both strategies, reprice the same strikes on the after
/// smile with decremented tau (intrinsic when the contract has expired),
/// and assemble the outcome row.
[[nodiscard]] StrategyOutcome evaluate_event(const EventStudy& study,
                                             const EvalConfig& config);

}  // namespace evrisk

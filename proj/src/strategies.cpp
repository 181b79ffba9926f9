#include "evrisk/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evrisk/errors.hpp"
#include "evrisk/pricing.hpp"

namespace evrisk {

namespace {

double delta_neutral_weight(double call_delta, double call_price,
                            double put_delta, double put_price) {
  const double rc = call_delta / call_price;
  const double rp = put_delta / put_price;
  return -rp / (rc - rp);
}

double leg_return(double exit_price, double entry_price) {
  return exit_price / entry_price - 1.0;
}

/// Fitted IV at arbitrary moneyness: linear interpolation between grid
/// nodes, clamped to the end nodes outside the grid.
double interpolate_iv(const FittedSmile& smile, double moneyness) {
  const auto& g = smile.grid;
  const double t = (moneyness - g.m0) / g.step;
  if (t <= 0.0) return smile.sigma.front();
  if (t >= g.count - 1) return smile.sigma.back();
  const int j = static_cast<int>(t);
  const double frac = t - j;
  const double lo = smile.sigma[static_cast<size_t>(j)];
  const double hi = smile.sigma[static_cast<size_t>(j + 1)];
  return lo + frac * (hi - lo);
}

}  // namespace

StraddlePosition form_straddle(const ChainSnapshot& before,
                               const FittedSmile& smile) {
  const int a = smile.grid.atm_index();
  StraddlePosition pos;
  pos.strike = smile.grid.node(a) * before.spot;
  const PricingInputs in{.spot = before.spot,
                         .strike = pos.strike,
                         .sigma = smile.sigma[static_cast<size_t>(a)],
                         .tau = before.tau(),
                         .rate = before.rate};
  pos.call_entry = call_price(in);
  pos.put_entry = put_price(in);
  if (!(pos.call_entry > 0.0) || !(pos.put_entry > 0.0)) {
    throw ZeroPrice("straddle legs for " + before.ticker +
                    " priced at zero; inputs are degenerate");
  }
  pos.call_delta = call_delta(in);
  pos.put_delta = put_delta(in);
  pos.w = delta_neutral_weight(pos.call_delta, pos.call_entry, pos.put_delta,
                               pos.put_entry);
  pos.impmove = (pos.call_entry + pos.put_entry) / before.spot;
  return pos;
}

double straddle_return(const StraddlePosition& position, double exit_call,
                       double exit_put) {
  if (!(position.call_entry > 0.0) || !(position.put_entry > 0.0)) {
    throw ZeroPrice("straddle entry prices must be positive");
  }
  const double rc = leg_return(exit_call, position.call_entry);
  const double rp = leg_return(exit_put, position.put_entry);
  return position.w * rc + (1.0 - position.w) * rp;
}

StranglePosition form_strangle(const ChainSnapshot& before,
                               const FittedSmile& smile, int width_steps) {
  if (width_steps < 1) throw GridTooNarrow("strangle width must be >= 1 step");
  const int a = smile.grid.atm_index();
  const int put_node = a - width_steps;
  const int call_node = a + width_steps;
  if (put_node < 0 || call_node >= smile.grid.count) {
    throw GridTooNarrow("grid too narrow for strangle legs " +
                        std::to_string(width_steps) + " steps from ATM");
  }
  StranglePosition pos;
  pos.put_strike = smile.grid.node(put_node) * before.spot;
  pos.call_strike = smile.grid.node(call_node) * before.spot;
  const PricingInputs put_in{.spot = before.spot,
                             .strike = pos.put_strike,
                             .sigma = smile.sigma[static_cast<size_t>(put_node)],
                             .tau = before.tau(),
                             .rate = before.rate};
  const PricingInputs call_in{.spot = before.spot,
                              .strike = pos.call_strike,
                              .sigma = smile.sigma[static_cast<size_t>(call_node)],
                              .tau = before.tau(),
                              .rate = before.rate};
  pos.put_entry = put_price(put_in);
  pos.call_entry = call_price(call_in);
  if (!(pos.put_entry > 0.0) || !(pos.call_entry > 0.0)) {
    throw ZeroPrice("strangle legs for " + before.ticker +
                    " priced at zero; widen the grid step or check inputs");
  }
  pos.put_delta = put_delta(put_in);
  pos.call_delta = call_delta(call_in);
  pos.cost_ratio = (pos.call_entry + pos.put_entry) / before.spot;
  return pos;
}

double strangle_return(const StranglePosition& position, double exit_call,
                       double exit_put, bool delta_neutral) {
  if (!(position.call_entry > 0.0) || !(position.put_entry > 0.0)) {
    throw ZeroPrice("strangle entry prices must be positive");
  }
  const double rc = leg_return(exit_call, position.call_entry);
  const double rp = leg_return(exit_put, position.put_entry);
  if (!delta_neutral) return 0.5 * (rc + rp);
  const double w = delta_neutral_weight(position.call_delta, position.call_entry,
                                        position.put_delta, position.put_entry);
  return w * rc + (1.0 - w) * rp;
}

namespace {

struct ExitPricer {
  const ChainSnapshot& after;
  const FittedSmile& after_smile;
  int exit_days = 0;  // calendar days from exit to expiry

  [[nodiscard]] double price(double strike, bool is_call) const {
    if (exit_days <= 0) {
      const double intrinsic =
          is_call ? after.spot - strike : strike - after.spot;
      return std::max(intrinsic, 0.0);
    }
    const PricingInputs in{.spot = after.spot,
                           .strike = strike,
                           .sigma = interpolate_iv(after_smile, strike / after.spot),
                           .tau = exit_days / 365.0,
                           .rate = after.rate};
    return is_call ? call_price(in) : put_price(in);
  }
};

}  // namespace

StrategyOutcome evaluate_event(const EventStudy& study,
                               const EvalConfig& config) {
  const ChainSnapshot& before = study.before;
  const ChainSnapshot& after = study.after;

  const GridMap before_grid = build_grid(before.observations, config.grid_step,
                                         config.grid_padding);
  const FittedSmile before_fit = fit_smile(before, before_grid.grid, config.fit);
  const double offset = config.convexest_offset > 0.0
                            ? config.convexest_offset
                            : before_grid.grid.step;
  const ShapeReport shape =
      classify_shape(before_fit, before_grid.node_of_obs, offset);

  const MarketParams before_market{before.spot, before.rate, before.tau()};
  const RiskNeutralDensity density = extract_density(before_fit, before_market);
  const std::vector<Mode> modes = detect_modes(density, config.prominence);

  StrategyOutcome out;
  out.ticker = study.ticker;
  out.quarter = study.quarter;
  out.is_concave = shape.is_concave;
  out.label = shape.label;
  out.convexest = shape.convexest;
  out.lambda_used = before_fit.lambda_used;
  out.modality = static_cast<int>(modes.size());
  out.arbitrage_free = before_fit.arbitrage_free;
  if (!before_fit.arbitrage_free) {
    out.warnings.push_back("before fit hit the lambda floor with negative density");
  }

  const StraddlePosition straddle = form_straddle(before, before_fit);
  const StranglePosition strangle =
      form_strangle(before, before_fit, config.strangle_width);
  out.impmove_straddle = straddle.impmove;
  out.impmove_strangle = strangle.cost_ratio;

  const GridMap after_grid =
      build_grid(after.observations, config.grid_step, config.grid_padding);
  const FittedSmile after_fit = fit_smile(after, after_grid.grid, config.fit);
  if (!after_fit.arbitrage_free) {
    out.arbitrage_free = false;
    out.warnings.push_back("after fit hit the lambda floor with negative density");
  }

  const long long elapsed = days_between(before.snapshot_date, after.snapshot_date);
  const int exit_days = before.expiry_days - static_cast<int>(elapsed);
  if (after.expiry_days != exit_days) {
    out.warnings.push_back(
        "after snapshot expiry_days " + std::to_string(after.expiry_days) +
        " does not match before expiry minus elapsed days (" +
        std::to_string(exit_days) + "); treating both as the same contract");
  }
  if (exit_days <= 0) {
    out.warnings.push_back("contract expired before exit; using intrinsic values");
  }

  const ExitPricer exits{after, after_fit, exit_days};
  out.straddle_return = straddle_return(straddle,
                                        exits.price(straddle.strike, true),
                                        exits.price(straddle.strike, false));
  out.strangle_return = strangle_return(strangle,
                                        exits.price(strangle.call_strike, true),
                                        exits.price(strangle.put_strike, false),
                                        config.strangle_delta_neutral);
  out.price_return = std::log(after.spot / before.spot);
  return out;
}

}  // namespace evrisk

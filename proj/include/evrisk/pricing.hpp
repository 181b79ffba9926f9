#pragma once

namespace evrisk {

struct PricingInputs {
  double spot = 0.0;
  double strike = 0.0;
  double sigma = 0.0;   // annualized vol fraction; 0 allowed for prices
  double tau = 0.0;     // year fraction, actual/365
  double rate = 0.0;    // continuously compounded
};

/// Market context a whole smile shares; tau is actual/365.
struct MarketParams {
  double spot = 0.0;
  double rate = 0.0;
  double tau = 0.0;
};

/// Standard normal CDF, accurate to ~1e-15 absolute via erfc.
[[nodiscard]] double norm_cdf(double x);

/// Black–Scholes European prices. sigma == 0 returns the discounted
/// intrinsic value. Throws DomainError on nonpositive spot/strike/tau or
/// negative sigma.
[[nodiscard]] double call_price(const PricingInputs& in);
[[nodiscard]] double put_price(const PricingInputs& in);

/// Spot deltas; require sigma > 0 (DomainError otherwise).
[[nodiscard]] double call_delta(const PricingInputs& in);
[[nodiscard]] double put_delta(const PricingInputs& in);

}  // namespace evrisk

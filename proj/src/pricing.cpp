#include "evrisk/pricing.hpp"

#include <cmath>
#include <string>

#include "evrisk/errors.hpp"

namespace evrisk {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void check_domain(const PricingInputs& in, bool need_vol) {
  auto fail = [](const char* what) { throw DomainError(what); };
  if (!(in.spot > 0.0)) fail("spot must be positive");
  if (!(in.strike > 0.0)) fail("strike must be positive");
  if (!(in.tau > 0.0)) fail("tau must be positive");
  if (in.sigma < 0.0) fail("sigma must be nonnegative");
  if (need_vol && in.sigma == 0.0) fail("delta requires sigma > 0");
}

double d1_of(const PricingInputs& in) {
  const double st = in.sigma * std::sqrt(in.tau);
  return (std::log(in.spot / in.strike) +
          (in.rate + 0.5 * in.sigma * in.sigma) * in.tau) /
         st;
}

}  // namespace

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double call_price(const PricingInputs& in) {
  check_domain(in, false);
  const double df = std::exp(-in.rate * in.tau);
  if (in.sigma == 0.0) return std::max(in.spot - in.strike * df, 0.0);
  const double d1 = d1_of(in);
  const double d2 = d1 - in.sigma * std::sqrt(in.tau);
  return in.spot * norm_cdf(d1) - in.strike * df * norm_cdf(d2);
}

double put_price(const PricingInputs& in) {
  check_domain(in, false);
  const double df = std::exp(-in.rate * in.tau);
  if (in.sigma == 0.0) return std::max(in.strike * df - in.spot, 0.0);
  const double d1 = d1_of(in);
  const double d2 = d1 - in.sigma * std::sqrt(in.tau);
  return in.strike * df * norm_cdf(-d2) - in.spot * norm_cdf(-d1);
}

double call_delta(const PricingInputs& in) {
  check_domain(in, true);
  return norm_cdf(d1_of(in));
}

double put_delta(const PricingInputs& in) {
  check_domain(in, true);
  return norm_cdf(d1_of(in)) - 1.0;
}

}  // namespace evrisk

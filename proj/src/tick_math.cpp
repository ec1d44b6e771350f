#include <algorithm>
#include <cmath>

#include "l2yield/ingest.hpp"

namespace l2yield {

namespace {
const double kLogTickBase = std::log1p(1e-4);  // ln(1.0001)
constexpr double kRangeEdgeTolerance = 1e-12;
}  // namespace

double sqrt_price_at_tick(int tick) {
  if (tick < -kMaxTick || tick > kMaxTick) {
    throw DomainError("tick " + std::to_string(tick) + " outside [-887272, 887272]");
  }
  return std::exp(0.5 * static_cast<double>(tick) * kLogTickBase);
}

double tick_at_sqrt_price(double sqrt_price) {
  if (!(sqrt_price > 0.0) || !std::isfinite(sqrt_price)) throw DomainError("sqrt_price must be positive");
  return 2.0 * std::log(sqrt_price) / kLogTickBase;
}

int range_lower_tick(int tick, int tick_spacing) {
  if (tick_spacing < 1) throw DomainError("tick_spacing must be positive");
  int q = tick / tick_spacing;
  if (tick % tick_spacing != 0 && tick < 0) --q;
  return q * tick_spacing;
}

RangeAmounts range_amounts(double liquidity, int tick, double sqrt_price, int tick_spacing) {
  if (!std::isfinite(liquidity) || liquidity < 0.0) throw DomainError("liquidity must be non-negative");
  const int lower = range_lower_tick(tick, tick_spacing);
  const double sa = sqrt_price_at_tick(lower);
  const double sb = sqrt_price_at_tick(std::min(lower + tick_spacing, kMaxTick));
  if (!(sqrt_price >= sa * (1.0 - kRangeEdgeTolerance) && sqrt_price <= sb * (1.0 + kRangeEdgeTolerance))) {
    throw DomainError("sqrt_price outside the initialized range of tick " + std::to_string(tick));
  }
  RangeAmounts out;
  out.amount0 = std::max(0.0, liquidity * (1.0 / sqrt_price - 1.0 / sb));
  out.amount1 = std::max(0.0, liquidity * (sqrt_price - sa));
  return out;
}

Money tick_tvl(double liquidity, int tick, double sqrt_price, int tick_spacing, Money usd_price_token0,
               Money usd_price_token1) {
  const auto amounts = range_amounts(liquidity, tick, sqrt_price, tick_spacing);
  return Money(amounts.amount0 * usd_price_token0.value() + amounts.amount1 * usd_price_token1.value());
}

int ticks_in_range(double range_fraction, int tick_spacing) {
  if (!(range_fraction >= 0.0 && range_fraction < 1.0)) throw DomainError("range_fraction must lie in [0, 1)");
  if (tick_spacing < 1) throw DomainError("tick_spacing must be positive");
  const double ranges = std::ceil(std::log1p(range_fraction) / (kLogTickBase * tick_spacing));
  return 2 * static_cast<int>(ranges) + 1;
}

int default_tick_spacing(int fee_bps) {
  if (fee_bps < 1) throw DomainError("fee tier must be at least 1 bp");
  return fee_bps == 1 ? 1 : 2 * fee_bps;
}

}  // namespace l2yield

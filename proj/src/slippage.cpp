#include "l2yield/slippage.hpp"

namespace l2yield {

namespace {
double annual_fee_volume(double fee, Money daily_volume, int annualization_days) {
  if (annualization_days < 1) throw DomainError("annualization_days must be >= 1");
  return fee * daily_volume.value() * annualization_days;
}
}  // namespace

double cpmm_price_impact(Money reserve_x, Money trade_size) {
  if (!(reserve_x.value() > 0.0)) throw DomainError("reserve must be positive");
  return trade_size.value() / reserve_x.value();
}

double equilibrium_slippage(const SlippageInput& input) {
  const double fees = annual_fee_volume(input.fee, input.daily_volume, input.annualization_days);
  if (!(fees > 0.0)) throw DomainError("fee * volume must be positive");
  return 2.0 * input.staking_rate.value() * input.trade_size.value() / fees;
}

Money equilibrium_tvl(double fee, Money daily_volume, Rate staking_rate, int annualization_days) {
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
  return Money(annual_fee_volume(fee, daily_volume, annualization_days) / staking_rate.value());
}

}  // namespace l2yield

#pragma once

#include "l2yield/model.hpp"

namespace l2yield {

struct SlippageInput {
  Money reserve_x;  // one side of a constant-product pool, in USD
  Money trade_size;
  double fee = 0.0;
  Money daily_volume;
  Rate staking_rate;
  int annualization_days = kDefaultAnnualizationDays;
};

/// Price impact of a trade of `trade_size` against reserve `reserve_x`: dx / x.
double cpmm_price_impact(Money reserve_x, Money trade_size);

/// Price impact in a pool whose return has settled at the staking rate:
/// 2 * r_s * dx / annual fee volume. Annual fee volume is
/// fee * daily_volume * annualization_days so that it shares r_s's time basis.
double equilibrium_slippage(const SlippageInput& input);

/// TVL at which the pool return equals the staking rate: annual fees / r_s.
Money equilibrium_tvl(double fee, Money daily_volume, Rate staking_rate, int annualization_days);

}  // namespace l2yield

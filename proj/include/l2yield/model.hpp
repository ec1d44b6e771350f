#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l2yield/types.hpp"

namespace l2yield {

inline constexpr int kDefaultAnnualizationDays = 365;

/// One pool on one chain.
///
/// The same type covers constant-product pools (tick_count == 1, tvl is the
/// full-range TVL) and concentrated-liquidity pools (tvl is the TVL inside the
/// current tick, tick_count is the number of ticks the new capital spans).
struct PoolState {
  std::string chain;
  std::string pool_id;
  double fee = 0.0;  // fraction of traded volume, 0.0005 == 5 bps
  Money daily_volume;
  Money tvl;
  int tick_count = 1;
  int annualization_days = kDefaultAnnualizationDays;
  // Overrides the computed zero-deposit return (used to replay published returns).
  std::optional<Rate> quoted_return;
};

struct LPConfig {
  Money wealth;
  Rate staking_rate;
};

/// Throws DomainError if the pool violates its field invariants.
void validate(const PoolState& pool);
/// Like validate(), and additionally requires tvl > 0.
void validate_for_allocation(const PoolState& pool);
void validate(const LPConfig& cfg);

/// Annualized fees earned by the pool: fee * daily_volume * annualization_days.
Money pool_fees(const PoolState& pool);

/// Return of depositing `w` into a constant-product pool: fees / (tvl + w).
Rate cpmm_return(const PoolState& pool, Money w);

/// Return of depositing `w` spread over `tick_count` ticks: fees / (tvl + w / m).
Rate clmm_return(const PoolState& pool, Money w);

/// Zero-deposit return r(0): the quoted return when present, else fees / tvl.
Rate initial_return(const PoolState& pool);

/// Annual fee income implied by initial_return(pool) at the pool's TVL.
/// Equals pool_fees(pool) unless a quoted return overrides it.
double fee_income(const PoolState& pool);

/// LP earnings per year for a deposit of `w`: income * w / (tvl + w / m).
double lp_earnings(const PoolState& pool, double w);

// Pools file: `chain,pool_id,fee_bps,tvl_usd,daily_volume_usd[,return_pct]`.
std::vector<PoolState> read_pools_csv(std::istream& in, int annualization_days = kDefaultAnnualizationDays);
std::vector<PoolState> read_pools_file(const std::string& path, int annualization_days = kDefaultAnnualizationDays);

}  // namespace l2yield

#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "l2yield/model.hpp"

namespace l2yield {

// ---------------------------------------------------------------------------
// Tick math
// ---------------------------------------------------------------------------

inline constexpr int kMaxTick = 887272;

/// 1.0001^(tick / 2). Throws DomainError outside [-kMaxTick, kMaxTick].
double sqrt_price_at_tick(int tick);

/// Fractional tick of a square-root price: 2 * log_1.0001(sqrt_price).
double tick_at_sqrt_price(double sqrt_price);

/// Lower tick of the initialized range containing `tick`.
int range_lower_tick(int tick, int tick_spacing);

struct RangeAmounts {
  double amount0 = 0.0;
  double amount1 = 0.0;
};

/// Token amounts held by liquidity L between the current price and the bounds
/// of its initialized range [i_l, i_l + tick_spacing).
RangeAmounts range_amounts(double liquidity, int tick, double sqrt_price, int tick_spacing);

/// USD value of range_amounts().
Money tick_tvl(double liquidity, int tick, double sqrt_price, int tick_spacing, Money usd_price_token0,
               Money usd_price_token1);

/// Number of initialized ranges covering +-range_fraction around spot:
/// 2 * ceil(ln(1 + range_fraction) / (ln(1.0001) * tick_spacing)) + 1.
int ticks_in_range(double range_fraction, int tick_spacing);

/// Tick spacing of a fee tier: 1 bp -> 1, otherwise 2 * fee_bps (5 -> 10, 30 -> 60, 100 -> 200).
int default_tick_spacing(int fee_bps);

// ---------------------------------------------------------------------------
// Swap events
// ---------------------------------------------------------------------------

using Date = std::chrono::sys_days;

Date utc_date(std::int64_t unix_seconds);
std::string format_date(Date date);
std::optional<Date> parse_date(const std::string& text);

struct SwapEvent {
  std::string chain;
  std::string pool_id;
  std::int64_t timestamp = 0;  // seconds since the Unix epoch
  std::int64_t block = 0;
  int tick = 0;
  double sqrt_price = 0.0;  // sqrt(token1 per token0), decimals-normalized
  double liquidity = 0.0;
  double amount0 = 0.0;
  double amount1 = 0.0;
  int fee_bps = 0;
  std::optional<std::int64_t> log_index;
  std::size_t line = 0;  // source line, for diagnostics

  Date date() const { return utc_date(timestamp); }
};

struct Diagnostic {
  std::size_t line = 0;
  std::string field;
  std::string message;

  std::string to_string() const;
};

struct SwapParseOptions {
  std::optional<int> tick_spacing;  // overrides default_tick_spacing(fee_bps)
  bool strict = false;              // throw on the first rejected row
};

struct SwapParseResult {
  std::vector<SwapEvent> events;     // accepted rows, input order
  std::vector<Diagnostic> errors;    // rejected rows
  std::vector<Diagnostic> warnings;  // dropped duplicates
};

/// Parses the swaps CSV
/// `chain,pool_id,timestamp,block,tick,sqrt_price,liquidity,amount0,amount1,fee_bps[,log_index]`.
///
/// Rows that fail to parse, or whose tick is more than one tick spacing away
/// from 2 * log_1.0001(sqrt_price), are rejected with a line-numbered
/// diagnostic (or a ParseError in strict mode). Duplicate events are dropped
/// with a warning; with a log_index column the key is (chain, pool, block,
/// log_index), otherwise the whole row.
SwapParseResult parse_swaps(std::istream& in, const SwapParseOptions& options = {});

struct PoolDayKey {
  std::string chain;
  std::string pool_id;
  Date date;

  friend auto operator<=>(const PoolDayKey&, const PoolDayKey&) = default;
};

/// Strict weak order used to pick the last swap of a day: (timestamp, block,
/// log_index), remaining fields only to make the choice order-independent.
bool swap_precedes(const SwapEvent& a, const SwapEvent& b);

/// The latest swap of each pool-day, keyed canonically by (chain, pool_id, date).
std::map<PoolDayKey, SwapEvent> daily_last_swaps(std::span<const SwapEvent> events);

/// USD volume of one swap: |amount1| valued at 1 USD per token1.
double swap_volume_usd(const SwapEvent& event);

std::map<PoolDayKey, double> daily_volumes(std::span<const SwapEvent> events);

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

struct MethodologyParams {
  double range_fraction = 0.12;
  double l1_concentration = 1.0;
  double l2_concentration = 1.75;
  std::optional<int> tick_spacing;
  int annualization_days = kDefaultAnnualizationDays;
  double tvl_multiplier = 1.0;  // effective TVL = tick TVL * multiplier
};

bool is_l1_chain(const std::string& chain);

struct PoolSnapshot {
  std::string chain;
  std::string pool_id;
  Date date;
  Money tick_tvl_usd;
  Money daily_volume_usd;
  Rate annualized_return;
  int tick_count = 1;
  double concentration = 1.0;
  double fee = 0.0;     // not part of the CSV
  bool usable = true;   // false when the tick TVL is zero
};

/// Snapshot of one pool-day from its last swap and the day's summed volume.
/// Token1 is valued at 1 USD and token0 at the swap's own price sqrt_price^2.
PoolSnapshot pool_snapshot(const SwapEvent& last_swap, Money day_volume_usd, const MethodologyParams& params);

/// Full pipeline: daily last swaps + volumes -> snapshots, canonical order.
std::vector<PoolSnapshot> build_snapshots(std::span<const SwapEvent> events, const MethodologyParams& params);

// `chain,pool_id,date,tick_tvl_usd,daily_volume_usd,annualized_return,m,concentration`
void write_snapshots_csv(std::ostream& out, std::span<const PoolSnapshot> snapshots);
std::vector<PoolSnapshot> read_snapshots_csv(std::istream& in);

/// Pool state for the allocator: tick TVL, quoted return = annualized_return.
PoolState to_pool_state(const PoolSnapshot& snapshot, int annualization_days = kDefaultAnnualizationDays);

}  // namespace l2yield

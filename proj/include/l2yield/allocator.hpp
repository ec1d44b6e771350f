#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "l2yield/model.hpp"

namespace l2yield {

/// How concentrated-liquidity pools enter the allocation problem.
enum class TickScaling {
  // Treat the current-tick TVL as the pool's TVL (tick_count ignored).
  kCurrentTick,
  // Optimize the literal concentrated earnings income * w / (tvl + w / m);
  // the optimal deposit is m times the kCurrentTick value.
  kSpreadOverTicks,
};

struct AllocatorOptions {
  TickScaling tick_scaling = TickScaling::kCurrentTick;
  double bisection_tolerance = 1e-9;  // relative to wealth
  int max_bisection_iterations = 200;
};

/// The allocation problem for one pool reduced to constant-product form:
/// earnings(w) = income * w / (tvl + w).
struct FeeCurve {
  double tvl = 0.0;
  double income = 0.0;

  double zero_return() const { return income / tvl; }
  double return_at(double w) const { return income / (tvl + w); }
  double earnings(double w) const { return w == 0.0 ? 0.0 : income * w / (tvl + w); }
  double marginal(double w) const { return income * tvl / ((tvl + w) * (tvl + w)); }
};

FeeCurve fee_curve(const PoolState& pool, TickScaling scaling = TickScaling::kCurrentTick);

struct PoolAllocation {
  std::string chain;
  std::string pool_id;
  Money allocation;
  Rate initial_return;  // r_i(0)
  Rate post_return;     // r_i(w_i)
};

struct AllocationResult {
  std::vector<PoolAllocation> pools;
  Money staking;
  Rate multiplier;  // Lagrange multiplier of the budget constraint
  Money total_earnings;
  bool budget_binding = false;

  double invested() const;
};

/// Deposit maximizing earnings in a single pool against the staking
/// alternative: max(0, tvl * (sqrt(r0 / r_s) - 1)).
Money allocation_for_pool(Money tvl, Rate r0, Rate staking_rate);

/// Earnings-maximizing split of cfg.wealth between staking and `pools`.
///
/// When the pools' combined demand at the staking rate fits in the budget every
/// pool receives its allocation_for_pool() amount and the remainder is staked
/// (multiplier == staking rate). Otherwise nothing is staked and the budget is
/// water-filled at the multiplier returned by water_fill_lambda().
AllocationResult optimal_allocation(std::span<const PoolState> pools, const LPConfig& cfg,
                                    const AllocatorOptions& options = {});

/// Sum over pools of max(0, sqrt(income * tvl / lambda) - tvl).
double pool_demand(std::span<const PoolState> pools, double lambda, TickScaling scaling = TickScaling::kCurrentTick);

/// Multiplier at which pool_demand() equals `wealth`, found by bisection on
/// [staking_rate, max r_i(0)]. Throws ContractError unless the demand at the
/// staking rate exceeds `wealth`.
Rate water_fill_lambda(std::span<const PoolState> pools, Money wealth, Rate staking_rate,
                       const AllocatorOptions& options = {});

/// Checks the KKT conditions of the allocation problem at relative tolerance `tol`:
/// stationarity for funded pools, dual feasibility for unfunded pools and for
/// staking, complementary slackness on the staking amount, and the budget identity.
bool verify_kkt(std::span<const PoolState> pools, const AllocationResult& result, const LPConfig& cfg, double tol,
                const AllocatorOptions& options = {});

/// Total earnings of an allocation vector: staking * r_s + sum earnings_i(w_i).
double allocation_earnings(std::span<const PoolState> pools, std::span<const double> allocations, double staking,
                           Rate staking_rate, TickScaling scaling = TickScaling::kCurrentTick);

struct OracleOptions {
  int grid_steps = 100;
  TickScaling tick_scaling = TickScaling::kCurrentTick;
  std::uint64_t max_grid_points = 50'000'000;
  int max_sweeps = 2000;
};

/// Numerical maximizer used to cross-check optimal_allocation(). Makes no use
/// of the closed form: up to four pools it scans every simplex point on a grid
/// of step wealth / grid_steps, then refines with pairwise golden-section
/// transfers until no transfer improves the earnings.
AllocationResult oracle_maximize(std::span<const PoolState> pools, const LPConfig& cfg,
                                 const OracleOptions& options = {});

}  // namespace l2yield

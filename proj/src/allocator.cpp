#include "l2yield/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace l2yield {

namespace {

std::vector<FeeCurve> curves_for(std::span<const PoolState> pools, TickScaling scaling) {
  std::vector<FeeCurve> curves;
  curves.reserve(pools.size());
  for (const auto& pool : pools) {
    validate_for_allocation(pool);
    curves.push_back(fee_curve(pool, scaling));
  }
  return curves;
}

double demand_at(std::span<const FeeCurve> curves, double lambda) {
  double total = 0.0;
  for (const auto& c : curves) total += std::max(0.0, std::sqrt(c.income * c.tvl / lambda) - c.tvl);
  return total;
}

double max_zero_return(std::span<const FeeCurve> curves) {
  double best = 0.0;
  for (const auto& c : curves) best = std::max(best, c.zero_return());
  return best;
}

double bisect_lambda(std::span<const FeeCurve> curves, double wealth, double staking_rate,
                     const AllocatorOptions& options) {
  double lo = staking_rate;
  double hi = max_zero_return(curves);
  double mid = lo;
  for (int i = 0; i < options.max_bisection_iterations; ++i) {
    mid = 0.5 * (lo + hi);
    const double d = demand_at(curves, mid);
    if (std::abs(d - wealth) <= options.bisection_tolerance * wealth) break;
    if (d > wealth) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

// Exact multiplier for the pools active at `lambda`: sum(sqrt(I*T/l) - T) = W over that set.
// Repeats until the active set is stable.
double polish_lambda(std::span<const FeeCurve> curves, double wealth, double lambda) {
  for (std::size_t iter = 0; iter <= curves.size(); ++iter) {
    double root_sum = 0.0;
    double tvl_sum = 0.0;
    for (const auto& c : curves) {
      if (c.zero_return() > lambda) {
        root_sum += std::sqrt(c.income * c.tvl);
        tvl_sum += c.tvl;
      }
    }
    if (root_sum == 0.0) return lambda;
    const double ratio = root_sum / (wealth + tvl_sum);
    const double next = ratio * ratio;
    bool same = true;
    for (const auto& c : curves) same = same && ((c.zero_return() > lambda) == (c.zero_return() > next));
    lambda = next;
    if (same) break;
  }
  return lambda;
}

AllocationResult assemble(std::span<const PoolState> pools, std::span<const FeeCurve> curves,
                          std::span<const double> allocations, double staking, double lambda, Rate staking_rate) {
  AllocationResult result;
  result.pools.reserve(pools.size());
  double earnings = staking * staking_rate.value();
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const double w = allocations[i];
    result.pools.push_back(PoolAllocation{pools[i].chain, pools[i].pool_id, Money(w), Rate(curves[i].zero_return()),
                                          Rate(curves[i].return_at(w))});
    earnings += curves[i].earnings(w);
  }
  result.staking = Money(staking);
  result.multiplier = Rate(lambda);
  result.total_earnings = Money(earnings);
  return result;
}

}  // namespace

double AllocationResult::invested() const {
  double total = 0.0;
  for (const auto& p : pools) total += p.allocation.value();
  return total;
}

FeeCurve fee_curve(const PoolState& pool, TickScaling scaling) {
  const double ticks = scaling == TickScaling::kSpreadOverTicks ? static_cast<double>(pool.tick_count) : 1.0;
  return FeeCurve{pool.tvl.value() * ticks, fee_income(pool) * ticks};
}

Money allocation_for_pool(Money tvl, Rate r0, Rate staking_rate) {
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
  if (!(tvl.value() > 0.0)) throw DomainError("tvl must be positive");
  if (r0 <= staking_rate) return Money(0.0);
  return Money(std::max(0.0, tvl.value() * (std::sqrt(r0.value() / staking_rate.value()) - 1.0)));
}

double pool_demand(std::span<const PoolState> pools, double lambda, TickScaling scaling) {
  if (!(lambda > 0.0)) throw DomainError("multiplier must be positive");
  const auto curves = curves_for(pools, scaling);
  return demand_at(curves, lambda);
}

Rate water_fill_lambda(std::span<const PoolState> pools, Money wealth, Rate staking_rate,
                       const AllocatorOptions& options) {
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
  const auto curves = curves_for(pools, options.tick_scaling);
  if (!(demand_at(curves, staking_rate.value()) > wealth.value())) {
    throw ContractError("water_fill_lambda: pool demand at the staking rate does not exceed the budget");
  }
  const double lambda = bisect_lambda(curves, wealth.value(), staking_rate.value(), options);
  return Rate(std::max(staking_rate.value(), polish_lambda(curves, wealth.value(), lambda)));
}

AllocationResult optimal_allocation(std::span<const PoolState> pools, const LPConfig& cfg,
                                    const AllocatorOptions& options) {
  validate(cfg);
  const double wealth = cfg.wealth.value();
  const double rs = cfg.staking_rate.value();
  const auto curves = curves_for(pools, options.tick_scaling);

  std::vector<double> w(pools.size(), 0.0);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    w[i] = allocation_for_pool(Money(curves[i].tvl), Rate(curves[i].zero_return()), cfg.staking_rate).value();
  }
  const double demand = std::accumulate(w.begin(), w.end(), 0.0);
  if (demand <= wealth) {
    auto result = assemble(pools, curves, w, wealth - demand, rs, cfg.staking_rate);
    return result;
  }

  double lambda = 0.0;
  if (wealth == 0.0) {
    lambda = std::max(rs, max_zero_return(curves));
    std::fill(w.begin(), w.end(), 0.0);
  } else {
    lambda = std::max(rs, polish_lambda(curves, wealth, bisect_lambda(curves, wealth, rs, options)));
    for (std::size_t i = 0; i < curves.size(); ++i) {
      w[i] = std::max(0.0, std::sqrt(curves[i].income * curves[i].tvl / lambda) - curves[i].tvl);
    }
  }
  // A binding budget leaves nothing for staking; W - sum(w) is rounding only.
  auto result = assemble(pools, curves, w, 0.0, lambda, cfg.staking_rate);
  result.budget_binding = true;
  return result;
}

bool verify_kkt(std::span<const PoolState> pools, const AllocationResult& result, const LPConfig& cfg, double tol,
                const AllocatorOptions& options) {
  if (result.pools.size() != pools.size()) return false;
  const auto curves = curves_for(pools, options.tick_scaling);
  const double lambda = result.multiplier.value();
  const double rs = cfg.staking_rate.value();
  const double wealth = cfg.wealth.value();

  const double total = result.staking.value() + result.invested();
  if (std::abs(total - wealth) > tol * std::max(wealth, 1.0)) return false;

  // Staking is always available at r_s, so no multiplier below it is optimal.
  if (lambda < rs * (1.0 - tol)) return false;
  if (result.staking.value() > 0.0 && std::abs(lambda - rs) > tol * rs) return false;

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double w = result.pools[i].allocation.value();
    if (w > 0.0) {
      if (std::abs(curves[i].marginal(w) - lambda) > tol * lambda) return false;
    } else if (curves[i].zero_return() > lambda * (1.0 + tol)) {
      return false;
    }
  }
  return true;
}

double allocation_earnings(std::span<const PoolState> pools, std::span<const double> allocations, double staking,
                           Rate staking_rate, TickScaling scaling) {
  if (allocations.size() != pools.size()) throw ContractError("allocation vector size does not match pool count");
  double total = staking * staking_rate.value();
  for (std::size_t i = 0; i < pools.size(); ++i) total += fee_curve(pools[i], scaling).earnings(allocations[i]);
  return total;
}

}  // namespace l2yield

#include "l2yield/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "l2yield/allocator.hpp"
#include "l2yield/csv.hpp"

namespace l2yield {

const char* to_string(StepStatus status) {
  switch (status) {
    case StepStatus::kAllocated:
      return "allocated";
    case StepStatus::kNoAllocation:
      return "no_allocation";
    case StepStatus::kClipped:
      return "clipped";
  }
  return "unknown";
}

bool ConvergenceSeries::clipped() const {
  return std::any_of(steps.begin(), steps.end(), [](const auto& s) { return s.status == StepStatus::kClipped; });
}

StepReturn step_return(Rate previous, Rate staking_rate) {
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
  if (previous < staking_rate) return {previous, false};
  return {Rate(std::sqrt(previous.value() * staking_rate.value())), true};
}

Rate analytic_return_after(int j, Rate r0, Rate staking_rate) {
  if (j < 0) throw DomainError("step count must be non-negative");
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
  if (j == 0) return r0;
  if (!(r0.value() > 0.0)) throw DomainError("initial return must be positive");
  const double weight = std::ldexp(1.0, -j);  // 1 / 2^j
  return Rate(std::exp(weight * std::log(r0.value()) + (1.0 - weight) * std::log(staking_rate.value())));
}

ConvergenceSeries simulate_sequential(const PoolState& pool, Rate staking_rate, Money wealth_per_lp, int num_lps) {
  validate_for_allocation(pool);
  if (num_lps < 1) throw DomainError("num_lps must be at least 1");
  if (!(staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");

  const double income = fee_income(pool);
  const double wealth = wealth_per_lp.value();
  double tvl = pool.tvl.value();

  ConvergenceSeries series;
  series.staking_rate = staking_rate;
  series.steps.reserve(static_cast<std::size_t>(num_lps));
  for (int j = 1; j <= num_lps; ++j) {
    ConvergenceStep step;
    step.lp_index = j;
    step.pre_return = Rate(income / tvl);
    const double optimal = allocation_for_pool(Money(tvl), step.pre_return, staking_rate).value();
    double deposit = optimal;
    if (optimal == 0.0) {
      step.status = StepStatus::kNoAllocation;
    } else if (optimal > wealth) {
      deposit = wealth;
      step.uninvested_demand = Money(optimal - wealth);
      step.status = StepStatus::kClipped;
    }
    tvl += deposit;
    step.allocation = Money(deposit);
    step.staking = Money(wealth - deposit);
    step.post_tvl = Money(tvl);
    series.steps.push_back(step);
  }
  return series;
}

void write_series_csv(std::ostream& out, const ConvergenceSeries& series) {
  out << "lp_index,pre_return,allocation_usd,staking_usd,post_tvl_usd,status\n";
  for (const auto& s : series.steps) {
    out << s.lp_index << ',' << csv::format_number(s.pre_return.value()) << ','
        << csv::format_number(s.allocation.value()) << ',' << csv::format_number(s.staking.value()) << ','
        << csv::format_number(s.post_tvl.value()) << ',' << to_string(s.status) << '\n';
  }
}

}  // namespace l2yield

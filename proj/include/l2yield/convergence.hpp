#pragma once

#include <iosfwd>
#include <vector>

#include "l2yield/model.hpp"

namespace l2yield {

enum class StepStatus {
  kAllocated,     // the LP's optimal deposit fit within its wealth
  kNoAllocation,  // pool return already at or below the staking rate
  kClipped,       // optimal deposit exceeded the LP's wealth; all wealth deposited
};

const char* to_string(StepStatus status);

struct ConvergenceStep {
  int lp_index = 0;  // 1-based
  Rate pre_return;   // pool return before this LP deposits
  Money allocation;
  Money staking;
  Money post_tvl;
  Money uninvested_demand;  // optimal deposit in excess of the LP's wealth
  StepStatus status = StepStatus::kAllocated;
};

struct ConvergenceSeries {
  Rate staking_rate;
  std::vector<ConvergenceStep> steps;

  bool clipped() const;
};

struct StepReturn {
  Rate rate;
  bool allocated = true;
};

/// Pool return seen by the next LP after one optimal deposit:
/// sqrt(r_prev * r_s). Below the staking rate nothing is deposited and the
/// return is unchanged.
StepReturn step_return(Rate previous, Rate staking_rate);

/// Closed form after j optimal deposits: r0^(1/2^j) * r_s^(1 - 1/2^j).
Rate analytic_return_after(int j, Rate r0, Rate staking_rate);

/// Sequential entry of `num_lps` LPs, each allocating optimally between the
/// pool and staking against the TVL left by its predecessors. Volume is held
/// fixed and deposits are permanent.
ConvergenceSeries simulate_sequential(const PoolState& pool, Rate staking_rate, Money wealth_per_lp, int num_lps);

// `lp_index,pre_return,allocation_usd,staking_usd,post_tvl_usd,status`
void write_series_csv(std::ostream& out, const ConvergenceSeries& series);

}  // namespace l2yield

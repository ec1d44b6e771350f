#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "l2yield/allocator.hpp"
#include "l2yield/ingest.hpp"

namespace l2yield::cli {

enum class Subcommand { kAllocate, kSimulate, kIngest, kReport, kSlippage };
enum class OutputFormat { kCsv, kJson, kTable };

const char* to_string(Subcommand s);
const char* to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(const std::string& text);

struct RunConfig {
  Subcommand subcommand = Subcommand::kAllocate;
  OutputFormat format = OutputFormat::kCsv;
  std::string out_path;  // empty: standard output

  std::string pools_path;
  std::string swaps_path;
  std::string snapshots_path;
  std::string date;

  std::optional<double> staking_rate;
  double wealth = 1'000'000.0;
  int annualization_days = kDefaultAnnualizationDays;
  bool scale_by_ticks = false;

  // simulate / slippage pool parameters
  std::string pool_id;  // selects a row of the pools file for simulate
  double fee = 0.0;
  double daily_volume = 0.0;
  double tvl = 0.0;
  int num_lps = 8;
  double trade_size = 0.0;
  std::optional<double> reserve;

  // ingest methodology
  double range_pct = 12.0;
  double concentration = 1.75;
  std::optional<int> tick_spacing;
  bool strict = false;
};

/// Footnote attached to allocation reports about the post-allocation return column.
extern const char* const kPostReturnNote;

/// Runs one subcommand. The report is rendered completely before anything is
/// written, so `out` (or the --out file) only receives complete reports.
/// Diagnostics go to `err`. Returns the process exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_allocate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_report(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_slippage(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Renders an allocation in the requested format (shared by allocate and report).
std::string render_allocation(std::span<const PoolState> pools, const AllocationResult& result, const LPConfig& lp,
                              const RunConfig& cfg);

}  // namespace l2yield::cli

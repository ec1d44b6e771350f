// l2yield: optimal LP capital allocation across staking and AMM pools.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "l2yield/cli.hpp"

namespace {

using l2yield::cli::OutputFormat;
using l2yield::cli::RunConfig;
using l2yield::cli::Subcommand;

void add_output_flags(CLI::App* app, RunConfig& cfg) {
  static const std::map<std::string, OutputFormat> kFormats{
      {"csv", OutputFormat::kCsv}, {"json", OutputFormat::kJson}, {"table", OutputFormat::kTable}};
  app->add_option("--format", cfg.format, "Output format: csv, json or table")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
      ->default_str("csv");
  app->add_option("--out", cfg.out_path, "Output file (default: standard output)");
  app->add_option("--annualization-days", cfg.annualization_days, "Days per year used to annualize daily fees")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_staking_rate(CLI::App* app, RunConfig& cfg) {
  app->add_option("--staking-rate", cfg.staking_rate, "Yearly staking rate as a fraction (0.0347 = 3.47%)")
      ->required()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal allocation of LP capital across ETH staking and AMM pools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(L2YIELD_VERSION_STRING));

  RunConfig cfg;

  auto* allocate = app.add_subcommand("allocate", "Optimal allocation for a pools file");
  allocate->add_option("--pools", cfg.pools_path, "Pools CSV")->required()->check(CLI::ExistingFile);
  add_staking_rate(allocate, cfg);
  allocate->add_option("--wealth", cfg.wealth, "Capital to allocate (USD)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  allocate->add_flag("--scale-by-ticks", cfg.scale_by_ticks,
                     "Optimize the concentrated-liquidity earnings over the pool's tick span");
  add_output_flags(allocate, cfg);

  auto* simulate = app.add_subcommand("simulate", "Sequential LP entry into one pool");
  add_staking_rate(simulate, cfg);
  simulate->add_option("--wealth", cfg.wealth, "Capital of each LP (USD)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--lps", cfg.num_lps, "Number of LPs")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--pools", cfg.pools_path, "Take the pool from a pools CSV")->check(CLI::ExistingFile);
  simulate->add_option("--pool-id", cfg.pool_id, "Pool to take from --pools (default: first row)");
  simulate->add_option("--fee", cfg.fee, "Fee as a fraction of volume")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--daily-volume", cfg.daily_volume, "Daily volume (USD)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--tvl", cfg.tvl, "Initial pool TVL (USD)")->check(CLI::PositiveNumber);
  add_output_flags(simulate, cfg);

  auto* ingest = app.add_subcommand("ingest", "Daily pool snapshots from a swaps export");
  ingest->add_option("--swaps", cfg.swaps_path, "Swaps CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--range-pct", cfg.range_pct, "LP price range around spot, percent")
      ->check(CLI::Range(0.0, 99.999))
      ->capture_default_str();
  ingest->add_option("--concentration", cfg.concentration, "L2 liquidity concentration factor relative to L1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ingest->add_option("--tick-spacing", cfg.tick_spacing, "Tick spacing for every pool (default: from fee tier)")
      ->check(CLI::PositiveNumber);
  ingest->add_flag("--strict", cfg.strict, "Fail on the first rejected row");
  add_output_flags(ingest, cfg);

  auto* report = app.add_subcommand("report", "Allocation report for one day of snapshots");
  report->add_option("--snapshots", cfg.snapshots_path, "Snapshot CSV from 'ingest'")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--date", cfg.date, "Day to report (YYYY-MM-DD)");
  add_staking_rate(report, cfg);
  report->add_option("--wealth", cfg.wealth, "Capital to allocate (USD)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  report->add_flag("--scale-by-ticks", cfg.scale_by_ticks,
                   "Optimize the concentrated-liquidity earnings over the pool's tick span");
  add_output_flags(report, cfg);

  auto* slippage = app.add_subcommand("slippage", "Equilibrium price impact of a trade");
  add_staking_rate(slippage, cfg);
  slippage->add_option("--fee", cfg.fee, "Fee as a fraction of volume")->required()->check(CLI::Range(0.0, 1.0));
  slippage->add_option("--daily-volume", cfg.daily_volume, "Daily volume (USD)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  slippage->add_option("--trade-size", cfg.trade_size, "Trade size (USD)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  slippage->add_option("--reserve", cfg.reserve, "Also report dx/x against this one-side reserve (USD)")
      ->check(CLI::PositiveNumber);
  add_output_flags(slippage, cfg);

  CLI11_PARSE(app, argc, argv);

  if (allocate->parsed()) cfg.subcommand = Subcommand::kAllocate;
  if (simulate->parsed()) cfg.subcommand = Subcommand::kSimulate;
  if (ingest->parsed()) cfg.subcommand = Subcommand::kIngest;
  if (report->parsed()) cfg.subcommand = Subcommand::kReport;
  if (slippage->parsed()) cfg.subcommand = Subcommand::kSlippage;

  return l2yield::cli::run(cfg, std::cout, std::cerr);
}

#include "l2yield/cli.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "l2yield/convergence.hpp"
#include "l2yield/csv.hpp"
#include "l2yield/slippage.hpp"

#ifndef L2YIELD_VERSION
#define L2YIELD_VERSION "dev"
#endif

namespace l2yield::cli {

namespace {

using json = nlohmann::ordered_json;
using csv::format_number;

const char* const kAllocationHeader =
    "chain,pool_id,tvl_usd,daily_volume_usd,return,allocation_usd,post_return,earnings_usd";

Rate require_staking_rate(const RunConfig& cfg) {
  if (!cfg.staking_rate) throw DomainError("--staking-rate is required");
  if (!(*cfg.staking_rate > 0.0)) throw DomainError("--staking-rate must be positive");
  return Rate(*cfg.staking_rate);
}

json meta(const RunConfig& cfg) {
  json m;
  m["tool"] = "l2yield";
  m["version"] = L2YIELD_VERSION;
  m["subcommand"] = to_string(cfg.subcommand);
  json params;
  if (cfg.staking_rate) params["staking_rate"] = *cfg.staking_rate;
  params["annualization_days"] = cfg.annualization_days;
  switch (cfg.subcommand) {
    case Subcommand::kAllocate:
    case Subcommand::kReport:
      params["wealth"] = cfg.wealth;
      params["tick_scaling"] = cfg.scale_by_ticks ? "spread_over_ticks" : "current_tick";
      if (cfg.subcommand == Subcommand::kReport) params["date"] = cfg.date;
      break;
    case Subcommand::kSimulate:
      params["wealth_per_lp"] = cfg.wealth;
      params["num_lps"] = cfg.num_lps;
      break;
    case Subcommand::kIngest:
      params["range_pct"] = cfg.range_pct;
      params["concentration"] = cfg.concentration;
      if (cfg.tick_spacing) params["tick_spacing"] = *cfg.tick_spacing;
      break;
    case Subcommand::kSlippage:
      break;
  }
  m["parameters"] = std::move(params);
  return m;
}

std::string percent(double fraction) { return fmt::format("{:.2f}", fraction * 100.0); }

AllocatorOptions allocator_options(const RunConfig& cfg) {
  AllocatorOptions o;
  o.tick_scaling = cfg.scale_by_ticks ? TickScaling::kSpreadOverTicks : TickScaling::kCurrentTick;
  return o;
}

int finish(const RunConfig& cfg, const std::string& report, std::ostream& out) {
  if (cfg.out_path.empty() || cfg.out_path == "-") {
    out << report;
    out.flush();
    return out ? 0 : 1;
  }
  std::ofstream file(cfg.out_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
  file << report;
  file.close();
  if (!file) throw std::runtime_error("failed writing '" + cfg.out_path + "'");
  return 0;
}

PoolState simulate_pool(const RunConfig& cfg) {
  if (!cfg.pools_path.empty()) {
    const auto pools = read_pools_file(cfg.pools_path, cfg.annualization_days);
    for (const auto& p : pools) {
      if (cfg.pool_id.empty() || p.pool_id == cfg.pool_id) return p;
    }
    throw DomainError("pool '" + cfg.pool_id + "' not found in " + cfg.pools_path);
  }
  PoolState pool;
  pool.chain = "model";
  pool.pool_id = cfg.pool_id.empty() ? "pool" : cfg.pool_id;
  pool.fee = cfg.fee;
  pool.daily_volume = Money(cfg.daily_volume);
  pool.tvl = Money(cfg.tvl);
  pool.annualization_days = cfg.annualization_days;
  validate_for_allocation(pool);
  return pool;
}

}  // namespace

const char* const kPostReturnNote =
    "post_return is the model-implied return sqrt(r(0) * lambda) after the optimal deposit "
    "(lambda equals the staking rate unless the budget binds). Externally published LP-return "
    "figures for the same pools can sit below it (e.g. 6.62% published vs 6.83% model-implied "
    "for Arbitrum on 2024-04-30); that gap is reported, not modeled.";

const char* to_string(Subcommand s) {
  switch (s) {
    case Subcommand::kAllocate:
      return "allocate";
    case Subcommand::kSimulate:
      return "simulate";
    case Subcommand::kIngest:
      return "ingest";
    case Subcommand::kReport:
      return "report";
    case Subcommand::kSlippage:
      return "slippage";
  }
  return "unknown";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::kCsv:
      return "csv";
    case OutputFormat::kJson:
      return "json";
    case OutputFormat::kTable:
      return "table";
  }
  return "unknown";
}

std::optional<OutputFormat> parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  if (text == "table") return OutputFormat::kTable;
  return std::nullopt;
}

std::string render_allocation(std::span<const PoolState> pools, const AllocationResult& result, const LPConfig& lp,
                              const RunConfig& cfg) {
  const auto options = allocator_options(cfg);
  const double rs = lp.staking_rate.value();
  const double w0 = result.staking.value();
  std::ostringstream os;

  switch (cfg.format) {
    case OutputFormat::kCsv: {
      os << kAllocationHeader << '\n';
      for (std::size_t i = 0; i < pools.size(); ++i) {
        const auto& a = result.pools[i];
        const double earn = fee_curve(pools[i], options.tick_scaling).earnings(a.allocation.value());
        os << a.chain << ',' << a.pool_id << ',' << format_number(pools[i].tvl.value()) << ','
           << format_number(pools[i].daily_volume.value()) << ',' << format_number(a.initial_return.value()) << ','
           << format_number(a.allocation.value()) << ',' << format_number(a.post_return.value()) << ','
           << format_number(earn) << '\n';
      }
      os << "staking,,,," << format_number(rs) << ',' << format_number(w0) << ',' << format_number(rs) << ','
         << format_number(rs * w0) << '\n';
      os << "lambda,,,," << format_number(result.multiplier.value()) << ",,,\n";
      os << "total,,,,," << format_number(lp.wealth.value()) << ",," << format_number(result.total_earnings.value())
         << '\n';
      break;
    }
    case OutputFormat::kJson: {
      json doc;
      auto m = meta(cfg);
      m["notes"] = json::array({kPostReturnNote});
      doc["meta"] = std::move(m);
      json rows = json::array();
      for (std::size_t i = 0; i < pools.size(); ++i) {
        const auto& a = result.pools[i];
        rows.push_back({{"chain", a.chain},
                        {"pool_id", a.pool_id},
                        {"tvl_usd", pools[i].tvl.value()},
                        {"daily_volume_usd", pools[i].daily_volume.value()},
                        {"return", a.initial_return.value()},
                        {"allocation_usd", a.allocation.value()},
                        {"post_return", a.post_return.value()},
                        {"earnings_usd", fee_curve(pools[i], options.tick_scaling).earnings(a.allocation.value())}});
      }
      doc["rows"] = std::move(rows);
      doc["staking_usd"] = w0;
      doc["lambda"] = result.multiplier.value();
      doc["total_earnings_usd"] = result.total_earnings.value();
      doc["wealth_usd"] = lp.wealth.value();
      os << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::kTable: {
      os << fmt::format("{:<12} {:>16} {:>20} {:>11} {:>16} {:>14}\n", "Chain", "TVL", "Daily Volume", "Return (%)",
                        "Allocation", "LP Return (%)");
      for (std::size_t i = 0; i < pools.size(); ++i) {
        const auto& a = result.pools[i];
        const bool funded = a.allocation.value() > 0.0;
        os << fmt::format("{:<12} {:>16.2f} {:>20.2f} {:>11} {:>16} {:>14}\n", a.chain, pools[i].tvl.value(),
                          pools[i].daily_volume.value(), percent(a.initial_return.value()),
                          funded ? fmt::format("{:.2f}", a.allocation.value()) : "-",
                          funded ? percent(a.post_return.value()) : "-");
      }
      os << fmt::format("\nstaking: {:.2f} at {}%   lambda: {}%   total earnings: {:.2f}/yr\n", w0, percent(rs),
                        percent(result.multiplier.value()), result.total_earnings.value());
      os << "\nnote: " << kPostReturnNote << '\n';
      break;
    }
  }
  return os.str();
}

int run_allocate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.pools_path.empty()) throw DomainError("--pools is required");
  const LPConfig lp{Money(cfg.wealth), require_staking_rate(cfg)};
  const auto pools = read_pools_file(cfg.pools_path, cfg.annualization_days);
  const auto result = optimal_allocation(pools, lp, allocator_options(cfg));
  if (cfg.format == OutputFormat::kCsv) err << "note: " << kPostReturnNote << '\n';
  return finish(cfg, render_allocation(pools, result, lp, cfg), out);
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Rate rs = require_staking_rate(cfg);
  const auto pool = simulate_pool(cfg);
  const auto series = simulate_sequential(pool, rs, Money(cfg.wealth), cfg.num_lps);
  for (const auto& s : series.steps) {
    if (s.status != StepStatus::kAllocated) {
      err << "lp " << s.lp_index << ": " << to_string(s.status) << '\n';
    }
  }

  std::ostringstream os;
  switch (cfg.format) {
    case OutputFormat::kCsv:
      write_series_csv(os, series);
      break;
    case OutputFormat::kJson: {
      json doc;
      doc["meta"] = meta(cfg);
      json rows = json::array();
      for (const auto& s : series.steps) {
        rows.push_back({{"lp_index", s.lp_index},
                        {"pre_return", s.pre_return.value()},
                        {"allocation_usd", s.allocation.value()},
                        {"staking_usd", s.staking.value()},
                        {"post_tvl_usd", s.post_tvl.value()},
                        {"status", to_string(s.status)}});
      }
      doc["rows"] = std::move(rows);
      os << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::kTable:
      os << fmt::format("{:>4} {:>14} {:>16} {:>16} {:>18}  {}\n", "LP", "Return (%)", "Allocation", "Staking",
                        "Pool TVL", "status");
      for (const auto& s : series.steps) {
        os << fmt::format("{:>4} {:>14} {:>16.2f} {:>16.2f} {:>18.2f}  {}\n", s.lp_index, percent(s.pre_return.value()),
                          s.allocation.value(), s.staking.value(), s.post_tvl.value(), to_string(s.status));
      }
      break;
  }
  return finish(cfg, os.str(), out);
}

int run_ingest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.swaps_path.empty()) throw DomainError("--swaps is required");
  std::ifstream in(cfg.swaps_path);
  if (!in) throw std::runtime_error("cannot open swaps file '" + cfg.swaps_path + "'");

  SwapParseOptions parse_options;
  parse_options.tick_spacing = cfg.tick_spacing;
  parse_options.strict = cfg.strict;
  const auto parsed = parse_swaps(in, parse_options);
  for (const auto& d : parsed.errors) err << "rejected: " << d.to_string() << '\n';
  for (const auto& d : parsed.warnings) err << "warning: " << d.to_string() << '\n';

  MethodologyParams params;
  params.range_fraction = cfg.range_pct / 100.0;
  params.l2_concentration = cfg.concentration;
  params.tick_spacing = cfg.tick_spacing;
  params.annualization_days = cfg.annualization_days;
  const auto snapshots = build_snapshots(parsed.events, params);
  for (const auto& s : snapshots) {
    if (!s.usable) {
      err << "warning: " << s.chain << '/' << s.pool_id << ' ' << format_date(s.date)
          << ": zero tick TVL, snapshot unusable for allocation\n";
    }
  }

  std::ostringstream os;
  if (cfg.format == OutputFormat::kJson) {
    json doc;
    doc["meta"] = meta(cfg);
    json rows = json::array();
    for (const auto& s : snapshots) {
      rows.push_back({{"chain", s.chain},
                      {"pool_id", s.pool_id},
                      {"date", format_date(s.date)},
                      {"tick_tvl_usd", s.tick_tvl_usd.value()},
                      {"daily_volume_usd", s.daily_volume_usd.value()},
                      {"annualized_return", s.annualized_return.value()},
                      {"m", s.tick_count},
                      {"concentration", s.concentration}});
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
  } else {
    write_snapshots_csv(os, snapshots);
  }
  return finish(cfg, os.str(), out);
}

int run_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.snapshots_path.empty()) throw DomainError("--snapshots is required");
  const LPConfig lp{Money(cfg.wealth), require_staking_rate(cfg)};
  std::ifstream in(cfg.snapshots_path);
  if (!in) throw std::runtime_error("cannot open snapshots file '" + cfg.snapshots_path + "'");
  const auto snapshots = read_snapshots_csv(in);

  std::set<std::string> dates;
  for (const auto& s : snapshots) dates.insert(format_date(s.date));
  std::string date = cfg.date;
  if (date.empty() && dates.size() == 1) date = *dates.begin();
  if (!dates.contains(date)) {
    std::string available;
    for (const auto& d : dates) available += (available.empty() ? "" : ", ") + d;
    err << "error: date '" << date << "' not present in " << cfg.snapshots_path
        << "; available dates: " << (available.empty() ? "(none)" : available) << '\n';
    return 1;
  }

  std::vector<PoolState> pools;
  for (const auto& s : snapshots) {
    if (format_date(s.date) != date) continue;
    if (!s.usable) {
      err << "warning: skipping " << s.chain << '/' << s.pool_id << ": zero tick TVL\n";
      continue;
    }
    pools.push_back(to_pool_state(s, cfg.annualization_days));
  }
  const auto result = optimal_allocation(pools, lp, allocator_options(cfg));
  RunConfig effective = cfg;
  effective.date = date;
  if (cfg.format == OutputFormat::kCsv) err << "note: " << kPostReturnNote << '\n';
  return finish(cfg, render_allocation(pools, result, lp, effective), out);
}

int run_slippage(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  SlippageInput input;
  input.staking_rate = require_staking_rate(cfg);
  input.fee = cfg.fee;
  input.daily_volume = Money(cfg.daily_volume);
  input.trade_size = Money(cfg.trade_size);
  input.annualization_days = cfg.annualization_days;
  if (!(cfg.fee >= 0.0 && cfg.fee <= 1.0)) throw DomainError("--fee must lie in [0, 1]");

  const double rho = equilibrium_slippage(input);
  const double eq_tvl = equilibrium_tvl(input.fee, input.daily_volume, input.staking_rate, input.annualization_days)
                            .value();
  std::optional<double> impact;
  if (cfg.reserve) impact = cpmm_price_impact(Money(*cfg.reserve), input.trade_size);

  std::ostringstream os;
  switch (cfg.format) {
    case OutputFormat::kCsv:
      os << "trade_size_usd,equilibrium_tvl_usd,equilibrium_slippage" << (impact ? ",price_impact" : "") << '\n';
      os << format_number(cfg.trade_size) << ',' << format_number(eq_tvl) << ',' << format_number(rho);
      if (impact) os << ',' << format_number(*impact);
      os << '\n';
      break;
    case OutputFormat::kJson: {
      json doc;
      doc["meta"] = meta(cfg);
      json row{{"trade_size_usd", cfg.trade_size}, {"equilibrium_tvl_usd", eq_tvl}, {"equilibrium_slippage", rho}};
      if (impact) row["price_impact"] = *impact;
      doc["rows"] = json::array({row});
      os << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::kTable:
      os << fmt::format("trade size:            {:.2f}\n", cfg.trade_size);
      os << fmt::format("equilibrium TVL:       {:.2f}\n", eq_tvl);
      os << fmt::format("equilibrium slippage:  {:.6f}%\n", rho * 100.0);
      if (impact) os << fmt::format("price impact (dx/x):   {:.6f}%\n", *impact * 100.0);
      break;
  }
  return finish(cfg, os.str(), out);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::kAllocate:
        return run_allocate(cfg, out, err);
      case Subcommand::kSimulate:
        return run_simulate(cfg, out, err);
      case Subcommand::kIngest:
        return run_ingest(cfg, out, err);
      case Subcommand::kReport:
        return run_report(cfg, out, err);
      case Subcommand::kSlippage:
        return run_slippage(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace l2yield::cli

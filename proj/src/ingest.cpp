#include "l2yield/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "l2yield/csv.hpp"

namespace l2yield {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

const std::vector<std::string> kSwapColumns{"chain",     "pool_id",   "timestamp", "block",   "tick",
                                            "sqrt_price", "liquidity", "amount0",   "amount1", "fee_bps"};

const char* kSnapshotHeader = "chain,pool_id,date,tick_tvl_usd,daily_volume_usd,annualized_return,m,concentration";

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int narrow_int(std::int64_t v, std::size_t line, const std::string& field) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(line, field, "value out of range");
  }
  return static_cast<int>(v);
}

SwapEvent parse_swap_row(const csv::Record& rec, bool has_log_index, const SwapParseOptions& options) {
  const auto& f = rec.fields;
  const std::size_t expected = kSwapColumns.size() + (has_log_index ? 1 : 0);
  if (f.size() != expected) {
    throw ParseError(rec.line, "row",
                     "expected " + std::to_string(expected) + " fields, got " + std::to_string(f.size()));
  }
  SwapEvent e;
  e.line = rec.line;
  e.chain = f[0];
  e.pool_id = f[1];
  if (e.chain.empty()) throw ParseError(rec.line, "chain", "empty value");
  if (e.pool_id.empty()) throw ParseError(rec.line, "pool_id", "empty value");
  e.timestamp = csv::parse_int(f[2], rec.line, "timestamp");
  e.block = csv::parse_int(f[3], rec.line, "block");
  e.tick = narrow_int(csv::parse_int(f[4], rec.line, "tick"), rec.line, "tick");
  e.sqrt_price = csv::parse_double(f[5], rec.line, "sqrt_price");
  e.liquidity = csv::parse_double(f[6], rec.line, "liquidity");
  e.amount0 = csv::parse_double(f[7], rec.line, "amount0");
  e.amount1 = csv::parse_double(f[8], rec.line, "amount1");
  e.fee_bps = narrow_int(csv::parse_int(f[9], rec.line, "fee_bps"), rec.line, "fee_bps");
  if (has_log_index) e.log_index = csv::parse_int(f[10], rec.line, "log_index");

  if (e.timestamp < 0) throw ParseError(rec.line, "timestamp", "must be non-negative");
  if (e.tick < -kMaxTick || e.tick > kMaxTick) throw ParseError(rec.line, "tick", "outside the v3 tick domain");
  if (!(e.sqrt_price > 0.0)) throw ParseError(rec.line, "sqrt_price", "must be positive");
  if (e.liquidity < 0.0) throw ParseError(rec.line, "liquidity", "must be non-negative");
  if (e.fee_bps < 1 || e.fee_bps > 10000) throw ParseError(rec.line, "fee_bps", "must lie in [1, 10000]");

  const int spacing = options.tick_spacing.value_or(default_tick_spacing(e.fee_bps));
  const double implied = tick_at_sqrt_price(e.sqrt_price);
  if (!(std::abs(static_cast<double>(e.tick) - implied) < spacing)) {
    throw ParseError(rec.line, "tick",
                     fmt::format("tick {} inconsistent with sqrt_price {} (implied tick {:.2f}, spacing {})", e.tick,
                                 f[5], implied, spacing));
  }
  return e;
}

std::string dedup_key(const csv::Record& rec, const SwapEvent& e) {
  if (e.log_index) return fmt::format("{}\x1f{}\x1f{}\x1f{}", e.chain, e.pool_id, e.block, *e.log_index);
  std::string key;
  for (const auto& field : rec.fields) {
    key += field;
    key += '\x1f';
  }
  return key;
}

}  // namespace

std::string Diagnostic::to_string() const {
  return fmt::format("line {}: {}: {}", line, field, message);
}

Date utc_date(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / kSecondsPerDay;
  if (unix_seconds % kSecondsPerDay != 0 && unix_seconds < 0) --days;
  return Date{std::chrono::days{days}};
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

std::optional<Date> parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char tail = 0;
  if (text.size() != 10 || std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

SwapParseResult parse_swaps(std::istream& in, const SwapParseOptions& options) {
  csv::Reader reader(in);
  csv::Record rec;
  SwapParseResult result;
  if (!reader.next(rec)) throw ParseError(1, "header", "missing header");

  const auto& header = rec.fields;
  const bool has_log_index = header.size() == kSwapColumns.size() + 1 && header.back() == "log_index";
  if (!(header.size() == kSwapColumns.size() || has_log_index) ||
      !std::equal(kSwapColumns.begin(), kSwapColumns.end(), header.begin())) {
    throw ParseError(rec.line, "header",
                     "expected 'chain,pool_id,timestamp,block,tick,sqrt_price,liquidity,amount0,amount1,fee_bps"
                     "[,log_index]'");
  }

  std::set<std::string> seen;
  while (reader.next(rec)) {
    SwapEvent event;
    try {
      event = parse_swap_row(rec, has_log_index, options);
    } catch (const ParseError& e) {
      if (options.strict) throw;
      const std::string what = e.what();
      const auto colon = what.find("': ");
      result.errors.push_back(
          Diagnostic{e.line(), e.field(), colon == std::string::npos ? what : what.substr(colon + 3)});
      continue;
    }
    if (!seen.insert(dedup_key(rec, event)).second) {
      result.warnings.push_back(Diagnostic{rec.line, "row", "duplicate swap event dropped"});
      continue;
    }
    result.events.push_back(std::move(event));
  }
  return result;
}

bool swap_precedes(const SwapEvent& a, const SwapEvent& b) {
  const auto key = [](const SwapEvent& e) {
    return std::make_tuple(e.timestamp, e.block, e.log_index.value_or(-1), e.tick, e.sqrt_price, e.liquidity,
                           e.amount0, e.amount1, e.fee_bps);
  };
  return key(a) < key(b);
}

std::map<PoolDayKey, SwapEvent> daily_last_swaps(std::span<const SwapEvent> events) {
  std::map<PoolDayKey, SwapEvent> last;
  for (const auto& e : events) {
    PoolDayKey key{e.chain, e.pool_id, e.date()};
    auto it = last.find(key);
    if (it == last.end()) {
      last.emplace(std::move(key), e);
    } else if (swap_precedes(it->second, e)) {
      it->second = e;
    }
  }
  return last;
}

double swap_volume_usd(const SwapEvent& event) { return std::abs(event.amount1); }

std::map<PoolDayKey, double> daily_volumes(std::span<const SwapEvent> events) {
  std::map<PoolDayKey, double> volumes;
  for (const auto& e : events) volumes[PoolDayKey{e.chain, e.pool_id, e.date()}] += swap_volume_usd(e);
  return volumes;
}

bool is_l1_chain(const std::string& chain) {
  const auto c = lower(chain);
  return c == "ethereum" || c == "mainnet" || c == "eth";
}

PoolSnapshot pool_snapshot(const SwapEvent& last_swap, Money day_volume_usd, const MethodologyParams& params) {
  if (!(params.tvl_multiplier > 0.0)) throw DomainError("tvl multiplier must be positive");
  if (params.annualization_days < 1) throw DomainError("annualization_days must be >= 1");
  PoolSnapshot s;
  s.chain = last_swap.chain;
  s.pool_id = last_swap.pool_id;
  s.date = last_swap.date();
  s.fee = last_swap.fee_bps / 1e4;

  const int spacing = params.tick_spacing.value_or(default_tick_spacing(last_swap.fee_bps));
  const double token0_usd = last_swap.sqrt_price * last_swap.sqrt_price;
  s.tick_tvl_usd =
      tick_tvl(last_swap.liquidity, last_swap.tick, last_swap.sqrt_price, spacing, Money(token0_usd), Money(1.0));
  s.daily_volume_usd = day_volume_usd;

  s.concentration = is_l1_chain(s.chain) ? params.l1_concentration : params.l2_concentration;
  if (!(s.concentration > 0.0)) throw DomainError("concentration factor must be positive");
  const int full_span = ticks_in_range(params.range_fraction, spacing);
  s.tick_count = std::max(1, static_cast<int>(std::ceil(full_span / s.concentration)));

  const double effective_tvl = s.tick_tvl_usd.value() * params.tvl_multiplier;
  if (effective_tvl > 0.0) {
    s.annualized_return = Rate(s.fee * day_volume_usd.value() * params.annualization_days / effective_tvl);
  } else {
    s.usable = false;
  }
  return s;
}

std::vector<PoolSnapshot> build_snapshots(std::span<const SwapEvent> events, const MethodologyParams& params) {
  const auto last = daily_last_swaps(events);
  const auto volumes = daily_volumes(events);
  std::vector<PoolSnapshot> out;
  out.reserve(last.size());
  for (const auto& [key, swap] : last) out.push_back(pool_snapshot(swap, Money(volumes.at(key)), params));
  return out;
}

void write_snapshots_csv(std::ostream& out, std::span<const PoolSnapshot> snapshots) {
  out << kSnapshotHeader << '\n';
  for (const auto& s : snapshots) {
    out << s.chain << ',' << s.pool_id << ',' << format_date(s.date) << ','
        << csv::format_number(s.tick_tvl_usd.value()) << ',' << csv::format_number(s.daily_volume_usd.value()) << ','
        << csv::format_number(s.annualized_return.value()) << ',' << s.tick_count << ','
        << csv::format_number(s.concentration) << '\n';
  }
}

std::vector<PoolSnapshot> read_snapshots_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw ParseError(1, "header", "missing header");
  if (fmt::format("{}", fmt::join(rec.fields, ",")) != kSnapshotHeader) {
    throw ParseError(rec.line, "header", std::string("expected '") + kSnapshotHeader + "'");
  }
  std::vector<PoolSnapshot> out;
  while (reader.next(rec)) {
    const auto& f = rec.fields;
    if (f.size() != 8) {
      throw ParseError(rec.line, "row", "expected 8 fields, got " + std::to_string(f.size()));
    }
    PoolSnapshot s;
    s.chain = f[0];
    s.pool_id = f[1];
    const auto date = parse_date(f[2]);
    if (!date) throw ParseError(rec.line, "date", "expected YYYY-MM-DD, got '" + f[2] + "'");
    s.date = *date;
    try {
      s.tick_tvl_usd = Money(csv::parse_double(f[3], rec.line, "tick_tvl_usd"));
      s.daily_volume_usd = Money(csv::parse_double(f[4], rec.line, "daily_volume_usd"));
      s.annualized_return = Rate(csv::parse_double(f[5], rec.line, "annualized_return"));
    } catch (const DomainError& e) {
      throw ParseError(rec.line, "row", e.what());
    }
    s.tick_count = narrow_int(csv::parse_int(f[6], rec.line, "m"), rec.line, "m");
    if (s.tick_count < 1) throw ParseError(rec.line, "m", "must be >= 1");
    s.concentration = csv::parse_double(f[7], rec.line, "concentration");
    s.usable = s.tick_tvl_usd.value() > 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

PoolState to_pool_state(const PoolSnapshot& snapshot, int annualization_days) {
  PoolState pool;
  pool.chain = snapshot.chain;
  pool.pool_id = snapshot.pool_id;
  pool.tvl = snapshot.tick_tvl_usd;
  pool.daily_volume = snapshot.daily_volume_usd;
  pool.tick_count = snapshot.tick_count;
  pool.annualization_days = annualization_days;
  pool.quoted_return = snapshot.annualized_return;
  if (snapshot.fee > 0.0) {
    pool.fee = snapshot.fee;
  } else if (snapshot.daily_volume_usd.value() > 0.0) {
    // Fee tier is not carried by the snapshot file; recover the implied one.
    pool.fee = std::min(1.0, snapshot.annualized_return.value() * snapshot.tick_tvl_usd.value() /
                                 (snapshot.daily_volume_usd.value() * annualization_days));
  }
  return pool;
}

}  // namespace l2yield

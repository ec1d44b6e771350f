#include "l2yield/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include "l2yield/csv.hpp"

namespace l2yield {

namespace {

void require_finite_non_negative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string(what) + " must be finite and non-negative");
  }
}

double effective_deposit(const PoolState& pool, double w) {
  require_finite_non_negative(w, "deposit");
  return w / static_cast<double>(pool.tick_count);
}

}  // namespace

void validate(const PoolState& pool) {
  if (!std::isfinite(pool.fee) || pool.fee < 0.0 || pool.fee > 1.0) {
    throw DomainError("pool " + pool.pool_id + ": fee must lie in [0, 1]");
  }
  if (pool.tick_count < 1) throw DomainError("pool " + pool.pool_id + ": tick_count must be >= 1");
  if (pool.annualization_days < 1) {
    throw DomainError("pool " + pool.pool_id + ": annualization_days must be >= 1");
  }
}

void validate_for_allocation(const PoolState& pool) {
  validate(pool);
  if (!(pool.tvl.value() > 0.0)) throw DomainError("pool " + pool.pool_id + ": tvl must be positive");
}

void validate(const LPConfig& cfg) {
  if (!(cfg.staking_rate.value() > 0.0)) throw DomainError("staking rate must be positive");
}

Money pool_fees(const PoolState& pool) {
  return Money(pool.fee * pool.daily_volume.value() * pool.annualization_days);
}

Rate cpmm_return(const PoolState& pool, Money w) {
  const double denom = pool.tvl.value() + w.value();
  if (!(denom > 0.0)) throw DomainError("pool " + pool.pool_id + ": tvl + w must be positive");
  return Rate(pool_fees(pool).value() / denom);
}

Rate clmm_return(const PoolState& pool, Money w) {
  validate(pool);
  const double denom = pool.tvl.value() + effective_deposit(pool, w.value());
  if (!(denom > 0.0)) throw DomainError("pool " + pool.pool_id + ": tvl + w/m must be positive");
  return Rate(pool_fees(pool).value() / denom);
}

Rate initial_return(const PoolState& pool) {
  if (pool.quoted_return) return *pool.quoted_return;
  return cpmm_return(pool, Money(0.0));
}

double fee_income(const PoolState& pool) {
  if (pool.quoted_return) return pool.quoted_return->value() * pool.tvl.value();
  return pool_fees(pool).value();
}

double lp_earnings(const PoolState& pool, double w) {
  if (w == 0.0) return 0.0;
  return fee_income(pool) * w / (pool.tvl.value() + effective_deposit(pool, w));
}

std::vector<PoolState> read_pools_csv(std::istream& in, int annualization_days) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw ParseError(1, "header", "missing header");

  const std::vector<std::string> required{"chain", "pool_id", "fee_bps", "tvl_usd", "daily_volume_usd"};
  const auto& header = rec.fields;
  const bool has_return = header.size() == required.size() + 1;
  if (header.size() < required.size() || header.size() > required.size() + 1 ||
      !std::equal(required.begin(), required.end(), header.begin()) ||
      (has_return && header.back() != "return_pct")) {
    throw ParseError(rec.line, "header",
                     "expected 'chain,pool_id,fee_bps,tvl_usd,daily_volume_usd[,return_pct]'");
  }

  std::vector<PoolState> pools;
  while (reader.next(rec)) {
    const auto& f = rec.fields;
    if (f.size() != header.size()) {
      throw ParseError(rec.line, "row", "expected " + std::to_string(header.size()) + " fields, got " +
                                            std::to_string(f.size()));
    }
    PoolState pool;
    pool.chain = f[0];
    pool.pool_id = f[1];
    if (pool.chain.empty()) throw ParseError(rec.line, "chain", "empty value");
    if (pool.pool_id.empty()) throw ParseError(rec.line, "pool_id", "empty value");
    pool.annualization_days = annualization_days;
    try {
      pool.fee = csv::parse_double(f[2], rec.line, "fee_bps") / 1e4;
      pool.tvl = Money(csv::parse_double(f[3], rec.line, "tvl_usd"));
      pool.daily_volume = Money(csv::parse_double(f[4], rec.line, "daily_volume_usd"));
      if (has_return) pool.quoted_return = Rate(csv::parse_double(f[5], rec.line, "return_pct") / 100.0);
      validate(pool);
    } catch (const DomainError& e) {
      throw ParseError(rec.line, "row", e.what());
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

std::vector<PoolState> read_pools_file(const std::string& path, int annualization_days) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pools file '" + path + "'");
  return read_pools_csv(in, annualization_days);
}

}  // namespace l2yield

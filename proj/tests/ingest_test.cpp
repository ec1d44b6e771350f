#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "l2yield/errors.hpp"
#include "l2yield/ingest.hpp"
#include "test_support.hpp"

namespace l2yield {
namespace {

constexpr const char* kHeader = "chain,pool_id,timestamp,block,tick,sqrt_price,liquidity,amount0,amount1,fee_bps\n";

SwapParseResult parse_text(const std::string& text, SwapParseOptions options = {}) {
  std::istringstream in(text);
  return parse_swaps(in, options);
}

SwapParseResult parse_fixture() {
  std::ifstream in(testing::data_path("swaps_fixture.csv"));
  return parse_swaps(in);
}

SwapEvent event(std::string chain, std::string pool, std::int64_t ts, std::int64_t block, double amount1 = 1.0) {
  SwapEvent e;
  e.chain = std::move(chain);
  e.pool_id = std::move(pool);
  e.timestamp = ts;
  e.block = block;
  e.sqrt_price = 1.0;
  e.liquidity = 1e6;
  e.amount1 = amount1;
  e.fee_bps = 5;
  return e;
}

Date day(int y, unsigned m, unsigned d) { return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}}; }

TEST(DateTest, UtcBoundaries) {
  EXPECT_EQ(format_date(utc_date(1714435199)), "2024-04-29");
  EXPECT_EQ(format_date(utc_date(1714435200)), "2024-04-30");
  EXPECT_EQ(format_date(utc_date(-1)), "1969-12-31");
  EXPECT_EQ(parse_date("2024-04-30"), day(2024, 4, 30));
  EXPECT_FALSE(parse_date("2024-02-30").has_value());
  EXPECT_FALSE(parse_date("30/04/2024").has_value());
}

TEST(ParseSwapsTest, WellFormedRows) {
  const auto result = parse_text(std::string(kHeader) +
                                 "arbitrum,p,1714352400,206000001,80556,56.127087934436791,3.1e6,-6.2,19531.55,5\n"
                                 "arbitrum,p,1714428800,206300002,80591,56.226328352472029,3.2e6,4.8,-15174.72,5\n");
  ASSERT_EQ(result.events.size(), 2u);
  EXPECT_TRUE(result.errors.empty());
  EXPECT_TRUE(result.warnings.empty());
  EXPECT_EQ(result.events[0].tick, 80556);
  EXPECT_EQ(result.events[1].block, 206300002);
  EXPECT_DOUBLE_EQ(result.events[1].amount1, -15174.72);
  EXPECT_EQ(result.events[1].line, 3u);
}

TEST(ParseSwapsTest, HeaderOnlyIsEmpty) {
  const auto result = parse_text(kHeader);
  EXPECT_TRUE(result.events.empty());
  EXPECT_TRUE(result.errors.empty());
}

TEST(ParseSwapsTest, BadHeaderThrows) {
  EXPECT_THROW(parse_text("chain,pool,timestamp\n"), ParseError);
  EXPECT_THROW(parse_text(""), ParseError);
}

TEST(ParseSwapsTest, InconsistentTickIsRejectedWithLine) {
  const std::string text = std::string(kHeader) +
                           "arbitrum,p,1714352400,206000001,80556,56.127087934436791,3.1e6,-6.2,19531.55,5\n"
                           "arbitrum,p,1714444200,206400500,70000,56.3,3.3e6,1.0,-3169.0,5\n";
  const auto result = parse_text(text);
  ASSERT_EQ(result.events.size(), 1u);
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].line, 3u);
  EXPECT_EQ(result.errors[0].field, "tick");

  try {
    parse_text(text, {.tick_spacing = std::nullopt, .strict = true});
    FAIL() << "strict mode accepted an inconsistent tick";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.field(), "tick");
  }
}

TEST(ParseSwapsTest, MalformedNumberIsRejected) {
  const auto result = parse_text(std::string(kHeader) + "arbitrum,p,abc,1,0,1.0,1,0,0,5\n" +
                                 "arbitrum,p,1,1,0,1.0,1,0,0\n");
  EXPECT_TRUE(result.events.empty());
  ASSERT_EQ(result.errors.size(), 2u);
  EXPECT_EQ(result.errors[0].line, 2u);
  EXPECT_EQ(result.errors[0].field, "timestamp");
  EXPECT_EQ(result.errors[1].line, 3u);
}

TEST(ParseSwapsTest, DuplicatesDroppedWithWarning) {
  const auto result = parse_fixture();
  EXPECT_EQ(result.events.size(), 11u);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_EQ(result.warnings[0].line, 13u);
  ASSERT_EQ(result.errors.size(), 1u);
  EXPECT_EQ(result.errors[0].line, 14u);
  EXPECT_EQ(result.errors[0].field, "tick");
}

TEST(ParseSwapsTest, LogIndexDistinguishesSameBlockEvents) {
  const std::string header =
      "chain,pool_id,timestamp,block,tick,sqrt_price,liquidity,amount0,amount1,fee_bps,log_index\n";
  const auto result = parse_text(header + "a,p,100,7,0,1.0,1e6,1,-1,5,3\n" + "a,p,100,7,0,1.0,1e6,1,-1,5,4\n" +
                                 "a,p,100,7,0,1.0,1e6,2,-2,5,4\n");
  ASSERT_EQ(result.events.size(), 2u);
  EXPECT_EQ(result.warnings.size(), 1u);
  EXPECT_EQ(result.events[1].log_index, 4);
}

TEST(DailyLastSwapsTest, OneEntryPerPoolDay) {
  const std::vector<SwapEvent> events{event("a", "p", 1714352400, 1), event("a", "p", 1714360000, 2),
                                      event("a", "p", 1714440000, 3)};
  const auto last = daily_last_swaps(events);
  ASSERT_EQ(last.size(), 2u);
  EXPECT_EQ(last.at({"a", "p", day(2024, 4, 29)}).block, 2);
  EXPECT_EQ(last.at({"a", "p", day(2024, 4, 30)}).block, 3);
}

TEST(DailyLastSwapsTest, TimestampTieBrokenByBlock) {
  const std::vector<SwapEvent> events{event("a", "p", 1714521200, 21), event("a", "p", 1714521200, 20)};
  EXPECT_EQ(daily_last_swaps(events).begin()->second.block, 21);
}

TEST(DailyLastSwapsTest, InterleavedPoolsAreSeparated) {
  const std::vector<SwapEvent> events{event("a", "p", 100, 1), event("b", "p", 200, 1), event("a", "q", 300, 1),
                                      event("a", "p", 400, 2)};
  const auto last = daily_last_swaps(events);
  ASSERT_EQ(last.size(), 3u);
  EXPECT_EQ(last.at({"a", "p", utc_date(0)}).timestamp, 400);
  EXPECT_EQ(last.at({"b", "p", utc_date(0)}).timestamp, 200);
}

TEST(DailyLastSwapsTest, PermutationInvariantAndIdempotent) {
  std::vector<SwapEvent> events = parse_fixture().events;
  const auto reference = daily_last_swaps(events);
  std::mt19937_64 gen(11);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(events.begin(), events.end(), gen);
    const auto shuffled = daily_last_swaps(events);
    ASSERT_EQ(shuffled.size(), reference.size());
    for (const auto& [key, ev] : reference) {
      EXPECT_EQ(shuffled.at(key).block, ev.block);
      EXPECT_EQ(shuffled.at(key).line, ev.line);
    }
  }
  std::vector<SwapEvent> once;
  for (const auto& [key, ev] : reference) once.push_back(ev);
  const auto twice = daily_last_swaps(once);
  ASSERT_EQ(twice.size(), reference.size());
  for (const auto& [key, ev] : reference) EXPECT_EQ(twice.at(key).block, ev.block);
}

TEST(DailyVolumesTest, SumsAbsoluteToken1) {
  const std::vector<SwapEvent> events{event("a", "p", 100, 1, 10.0), event("a", "p", 200, 2, -4.5)};
  EXPECT_DOUBLE_EQ(daily_volumes(events).at({"a", "p", utc_date(0)}), 14.5);
}

TEST(PoolSnapshotTest, ZeroVolumeGivesZeroReturn) {
  SwapEvent e = event("arbitrum", "p", 100, 1);
  const auto snap = pool_snapshot(e, Money(0), {});
  EXPECT_TRUE(snap.usable);
  EXPECT_EQ(snap.annualized_return.value(), 0.0);
}

TEST(PoolSnapshotTest, ConcentrationShrinksTickCount) {
  SwapEvent e = event("ethereum", "p", 100, 1);
  EXPECT_EQ(pool_snapshot(e, Money(1), {}).tick_count, 229);
  EXPECT_EQ(pool_snapshot(e, Money(1), {}).concentration, 1.0);
  e.chain = "arbitrum";
  EXPECT_EQ(pool_snapshot(e, Money(1), {}).tick_count, 131);
  EXPECT_EQ(pool_snapshot(e, Money(1), {}).concentration, 1.75);
}

TEST(PoolSnapshotTest, ZeroTvlIsUnusable) {
  SwapEvent e = event("arbitrum", "p", 100, 1);
  e.liquidity = 0.0;
  const auto snap = pool_snapshot(e, Money(100), {});
  EXPECT_FALSE(snap.usable);
  EXPECT_EQ(snap.tick_tvl_usd.value(), 0.0);
}

struct Expected {
  const char* chain;
  Date date;
  double tick_tvl;
  double volume;
  int m;
  double fee;
};

// Tick TVLs evaluated at 50 digits from the fixture's last swap of each day.
const std::vector<Expected> kFixtureExpected{
    {"arbitrum", day(2024, 4, 29), 89941.581496325331535, 34706.27, 131, 0.0005},
    {"arbitrum", day(2024, 4, 30), 101669.12047826501508, 58915.25, 131, 0.0005},
    {"ethereum", day(2024, 4, 29), 222008.04400539802387, 20501.475, 229, 0.0005},
    {"ethereum", day(2024, 4, 30), 237123.31565697138016, 23006.5, 229, 0.0005},
    {"zksync", day(2024, 4, 29), 102.16278453441945131, 9.465, 34, 0.002},
    {"zksync", day(2024, 4, 30), 106.05896852254539096, 25.504, 34, 0.002},
};

TEST(BuildSnapshotsTest, FixtureMatchesHighPrecisionValues) {
  const auto snaps = build_snapshots(parse_fixture().events, {});
  ASSERT_EQ(snaps.size(), kFixtureExpected.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto& s = snaps[i];
    const auto& x = kFixtureExpected[i];
    SCOPED_TRACE(std::string(x.chain) + " " + format_date(x.date));
    EXPECT_EQ(s.chain, x.chain);
    EXPECT_EQ(s.date, x.date);
    EXPECT_NEAR(s.tick_tvl_usd.value(), x.tick_tvl, 1e-9 * x.tick_tvl);
    EXPECT_NEAR(s.daily_volume_usd.value(), x.volume, 1e-9 * x.volume);
    EXPECT_EQ(s.tick_count, x.m);
    const double expected_return = x.fee * x.volume * 365 / x.tick_tvl;
    EXPECT_NEAR(s.annualized_return.value(), expected_return, 1e-9 * expected_return);
  }
}

TEST(BuildSnapshotsTest, GoldenCsvByteForByte) {
  const auto snaps = build_snapshots(parse_fixture().events, {});
  std::ostringstream out;
  write_snapshots_csv(out, snaps);
  std::ifstream golden(testing::data_path("snapshots_golden.csv"), std::ios::binary);
  std::stringstream expected;
  expected << golden.rdbuf();
  EXPECT_EQ(out.str(), expected.str());
}

TEST(BuildSnapshotsTest, CsvRoundTrip) {
  const auto snaps = build_snapshots(parse_fixture().events, {});
  std::ostringstream out;
  write_snapshots_csv(out, snaps);
  std::istringstream in(out.str());
  const auto back = read_snapshots_csv(in);
  ASSERT_EQ(back.size(), snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    EXPECT_EQ(back[i].chain, snaps[i].chain);
    EXPECT_EQ(back[i].date, snaps[i].date);
    EXPECT_EQ(back[i].tick_tvl_usd.value(), snaps[i].tick_tvl_usd.value());
    EXPECT_EQ(back[i].annualized_return.value(), snaps[i].annualized_return.value());
    EXPECT_EQ(back[i].tick_count, snaps[i].tick_count);
  }
}

TEST(BuildSnapshotsTest, ToPoolStateQuotesAnnualizedReturn) {
  const auto snaps = build_snapshots(parse_fixture().events, {});
  const PoolState pool = to_pool_state(snaps[1]);
  EXPECT_EQ(pool.tvl.value(), snaps[1].tick_tvl_usd.value());
  ASSERT_TRUE(pool.quoted_return.has_value());
  EXPECT_EQ(pool.quoted_return->value(), snaps[1].annualized_return.value());
  EXPECT_EQ(pool.tick_count, 131);
}

}  // namespace
}  // namespace l2yield

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "l2yield/ingest.hpp"
#include "test_support.hpp"

namespace l2yield {
namespace {

TEST(SqrtPriceAtTickTest, ExampleValues) {
  EXPECT_EQ(sqrt_price_at_tick(0), 1.0);
  EXPECT_NEAR(sqrt_price_at_tick(2), 1.0001, 1e-12 * 1.0001);
  EXPECT_NEAR(sqrt_price_at_tick(-2), 1.0 / 1.0001, 1e-12);
  EXPECT_THROW(sqrt_price_at_tick(887'273), DomainError);
  EXPECT_THROW(sqrt_price_at_tick(-887'273), DomainError);
  EXPECT_NO_THROW(sqrt_price_at_tick(kMaxTick));
}

TEST(SqrtPriceAtTickTest, MultiplicativeAndReciprocal) {
  testing::Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const int a = rng.integer(-400'000, 400'000);
    const int b = rng.integer(-400'000, 400'000);
    const double product = sqrt_price_at_tick(a) * sqrt_price_at_tick(b);
    EXPECT_NEAR(sqrt_price_at_tick(a + b), product, 1e-12 * product);
    EXPECT_NEAR(sqrt_price_at_tick(-a), 1.0 / sqrt_price_at_tick(a), 1e-12 / sqrt_price_at_tick(a));
  }
}

TEST(RangeLowerTickTest, FloorsTowardMinusInfinity) {
  EXPECT_EQ(range_lower_tick(0, 10), 0);
  EXPECT_EQ(range_lower_tick(9, 10), 0);
  EXPECT_EQ(range_lower_tick(-1, 10), -10);
  EXPECT_EQ(range_lower_tick(-10, 10), -10);
  EXPECT_EQ(range_lower_tick(80'686, 10), 80'680);
}

// Token amounts as integrals of the range curve: dx = L d(1/s), dy = L ds.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

TEST(TickTvlTest, ExampleValues) {
  EXPECT_EQ(tick_tvl(0, 0, 1.0, 10, Money(1), Money(1)).value(), 0.0);

  const auto amounts = range_amounts(1e6, 0, 1.0, 10);
  EXPECT_EQ(amounts.amount1, 0.0);
  // 1e6 * (1 - 1.0001^-5), evaluated at 50 digits.
  EXPECT_NEAR(amounts.amount0, 499.850034993001, 1e-9 * 499.85);
  const double sb = sqrt_price_at_tick(10);
  EXPECT_NEAR(amounts.amount0, simpson([](double s) { return 1e6 / (s * s); }, 1.0, sb), 1e-9 * 499.85);
  EXPECT_NEAR(tick_tvl(1e6, 0, 1.0, 10, Money(1), Money(1)).value(), 499.850034993001, 1e-9 * 499.85);

  const auto at_top = range_amounts(1e6, 0, sb, 10);
  EXPECT_EQ(at_top.amount0, 0.0);
  EXPECT_NEAR(at_top.amount1, 1e6 * (sb - 1.0), 1e-9);
}

TEST(TickTvlTest, IntegralCrossCheckInsideRange) {
  const int tick = 80'591;
  const double sa = sqrt_price_at_tick(80'590);
  const double sb = sqrt_price_at_tick(80'600);
  const double sp = 56.226328352472029;
  const auto amounts = range_amounts(3.2e6, tick, sp, 10);
  EXPECT_NEAR(amounts.amount0, simpson([](double s) { return 3.2e6 / (s * s); }, sp, sb), 1e-9 * amounts.amount0);
  EXPECT_NEAR(amounts.amount1, simpson([](double) { return 3.2e6; }, sa, sp), 1e-9 * amounts.amount1);
}

TEST(TickTvlTest, OutsideRangeIsDomainError) {
  EXPECT_THROW(range_amounts(1e6, 0, 1.01, 10), DomainError);
  EXPECT_THROW(range_amounts(1e6, 0, 0.99, 10), DomainError);
  EXPECT_THROW(range_amounts(-1, 0, 1.0, 10), DomainError);
}

TEST(TickTvlTest, LinearInLiquidityContinuousInPrice) {
  testing::Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const int lower = 10 * rng.integer(-50'000, 50'000);
    const double sa = sqrt_price_at_tick(lower);
    const double sb = sqrt_price_at_tick(lower + 10);
    const double sp = rng.uniform(sa, sb);
    const double L = rng.log_uniform(1, 1e12);
    const double c = rng.uniform(0.1, 10);
    const double p0 = sp * sp;
    const double v = tick_tvl(L, lower, sp, 10, Money(p0), Money(1)).value();
    EXPECT_NEAR(tick_tvl(c * L, lower, sp, 10, Money(p0), Money(1)).value(), c * v, 1e-12 * c * v + 1e-300);
    const double eps = (sb - sa) * 1e-9;
    if (sp + eps < sb) {
      const double nearby = tick_tvl(L, lower, sp + eps, 10, Money(p0), Money(1)).value();
      EXPECT_NEAR(nearby, v, 1e-6 * std::max(v, 1e-12));
    }
  }
}

TEST(TicksInRangeTest, ExampleValues) {
  EXPECT_EQ(ticks_in_range(0.0, 10), 1);
  EXPECT_EQ(ticks_in_range(0.12, 10), 229);
  EXPECT_EQ(ticks_in_range(0.12, 1), 2269);
  EXPECT_THROW(ticks_in_range(1.0, 10), DomainError);
  EXPECT_THROW(ticks_in_range(-0.1, 10), DomainError);
}

TEST(TickSpacingTest, FeeTiers) {
  EXPECT_EQ(default_tick_spacing(1), 1);
  EXPECT_EQ(default_tick_spacing(5), 10);
  EXPECT_EQ(default_tick_spacing(30), 60);
  EXPECT_EQ(default_tick_spacing(100), 200);
  EXPECT_EQ(default_tick_spacing(20), 40);
}

}  // namespace
}  // namespace l2yield

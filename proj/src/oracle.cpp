#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "l2yield/allocator.hpp"

namespace l2yield {

namespace {

constexpr std::size_t kMaxGridPools = 4;
constexpr int kGoldenIterations = 100;

// Number of points k_1..k_n >= 0 with sum <= steps, i.e. C(steps + n, n).
std::uint64_t simplex_points(std::uint64_t steps, std::size_t n, std::uint64_t cap) {
  double count = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    count = count * static_cast<double>(steps + i) / static_cast<double>(i);
    if (count > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(count));
}

class Objective {
 public:
  Objective(std::vector<FeeCurve> curves, double staking_rate)
      : curves_(std::move(curves)), staking_rate_(staking_rate) {}

  // x[0] is staking, x[i + 1] the deposit into pool i.
  double term(std::size_t k, double x) const {
    return k == 0 ? staking_rate_ * x : curves_[k - 1].earnings(x);
  }

  double operator()(std::span<const double> x) const {
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) total += term(k, x[k]);
    return total;
  }

  std::size_t pools() const { return curves_.size(); }
  const FeeCurve& curve(std::size_t i) const { return curves_[i]; }

 private:
  std::vector<FeeCurve> curves_;
  double staking_rate_;
};

void grid_search(const Objective& f, double wealth, int steps, std::vector<double>& best) {
  const std::size_t n = f.pools();
  const double h = wealth / steps;
  std::vector<double> x(n + 1, 0.0);
  double best_value = -1.0;

  std::function<void(std::size_t, int)> visit = [&](std::size_t i, int remaining) {
    if (i == n) {
      x[0] = h * remaining;
      const double v = f(x);
      if (v > best_value) {
        best_value = v;
        best = x;
      }
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      x[i + 1] = h * k;
      visit(i + 1, remaining - k);
    }
  };
  visit(0, steps);
}

// Maximizes the objective along x[a] += t, x[b] -= t. Returns the gain.
double improve_pair(const Objective& f, std::vector<double>& x, std::size_t a, std::size_t b) {
  const double xa = x[a];
  const double xb = x[b];
  auto g = [&](double t) { return f.term(a, xa + t) + f.term(b, xb - t); };

  double lo = -xa;
  double hi = xb;
  if (!(hi > lo)) return 0.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < kGoldenIterations && hi - lo > 0.0; ++it) {
    if (gc >= gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - inv_phi * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + inv_phi * (hi - lo);
      gd = g(d);
    }
  }

  const double base = g(0.0);
  double best_t = 0.0;
  double best_g = base;
  for (double t : {0.5 * (lo + hi), -xa, xb}) {
    const double v = g(t);
    if (v > best_g) {
      best_g = v;
      best_t = t;
    }
  }
  if (best_t == 0.0) return 0.0;
  // Endpoints are set exactly so that emptied coordinates stay at zero.
  if (best_t == -xa) {
    x[b] = xb + xa;
    x[a] = 0.0;
  } else if (best_t == xb) {
    x[a] = xa + xb;
    x[b] = 0.0;
  } else {
    x[a] = xa + best_t;
    x[b] = xb - best_t;
  }
  return best_g - base;
}

}  // namespace

AllocationResult oracle_maximize(std::span<const PoolState> pools, const LPConfig& cfg, const OracleOptions& options) {
  validate(cfg);
  if (options.grid_steps < 1) throw DomainError("grid_steps must be positive");
  const double wealth = cfg.wealth.value();
  const double rs = cfg.staking_rate.value();

  std::vector<FeeCurve> curves;
  for (const auto& pool : pools) {
    validate_for_allocation(pool);
    curves.push_back(fee_curve(pool, options.tick_scaling));
  }
  const Objective f(curves, rs);
  const std::size_t n = pools.size();

  std::vector<double> x(n + 1, 0.0);
  x[0] = wealth;
  if (n > 0 && wealth > 0.0 && n <= kMaxGridPools) {
    const auto points = simplex_points(static_cast<std::uint64_t>(options.grid_steps), n, options.max_grid_points);
    if (points > options.max_grid_points) {
      throw ResourceLimitError("oracle grid would need more than " + std::to_string(options.max_grid_points) +
                               " points");
    }
    grid_search(f, wealth, options.grid_steps, x);
  }

  if (n > 0 && wealth > 0.0) {
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      double gain = 0.0;
      for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = a + 1; b <= n; ++b) gain += improve_pair(f, x, a, b);
      }
      if (gain <= 1e-15 * std::max(1.0, std::abs(f(x)))) break;
    }
  }

  // Rounding guard: the pairwise moves conserve the sum only up to ulps.
  const double invested = std::accumulate(x.begin() + 1, x.end(), 0.0);
  x[0] = std::max(0.0, wealth - invested);

  AllocationResult result;
  double lambda = rs;
  if (x[0] == 0.0 && n > 0) {
    double sum = 0.0;
    int funded = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i + 1] > 0.0) {
        sum += curves[i].marginal(x[i + 1]);
        ++funded;
      }
    }
    lambda = funded > 0 ? std::max(rs, sum / funded) : rs;
    result.budget_binding = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    result.pools.push_back(PoolAllocation{pools[i].chain, pools[i].pool_id, Money(x[i + 1]),
                                          Rate(curves[i].zero_return()), Rate(curves[i].return_at(x[i + 1]))});
  }
  result.staking = Money(x[0]);
  result.multiplier = Rate(lambda);
  result.total_earnings = Money(f(x));
  return result;
}

}  // namespace l2yield

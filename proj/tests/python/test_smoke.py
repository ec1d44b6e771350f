import math
import os

import pytest

import l2yield

DATA = os.environ.get("L2YIELD_TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_single_pool_allocation():
    w = l2yield.allocation_for_pool(4e6, 0.1, 0.0342)
    assert w == pytest.approx(4e6 * (math.sqrt(0.1 / 0.0342) - 1), rel=1e-12)
    assert l2yield.allocation_for_pool(4e6, 0.03, 0.0342) == 0.0


def test_snapshot_allocation():
    pools = l2yield.read_pools(os.path.join(DATA, "apr30_pools.csv"))
    assert len(pools) == 6
    result = l2yield.optimal_allocation(pools, 1e7, 0.0347)
    allocations = [p["allocation"] for p in result["pools"]]
    assert allocations[0] == 0.0
    assert allocations[1] == pytest.approx(84699.60, rel=2e-3)
    assert not result["budget_binding"]
    assert result["staking"] + sum(allocations) == pytest.approx(1e7, rel=1e-12)
    assert l2yield.verify_kkt(pools, result, 1e7, 0.0347)


def test_oracle_agrees_when_budget_binds():
    pools = [
        l2yield.Pool("a", "p1", 1.0, 4e5, 4e6, annualization_days=1),
        l2yield.Pool("b", "p2", 1.0, 9e4, 1e6, annualization_days=1),
    ]
    closed = l2yield.optimal_allocation(pools, 5e5, 0.0342)
    assert closed["budget_binding"]
    assert closed["staking"] == 0.0
    numeric = l2yield.oracle_maximize(pools, 5e5, 0.0342)
    assert numeric["total_earnings"] == pytest.approx(closed["total_earnings"], rel=1e-6)


def test_convergence_series():
    pool = l2yield.Pool("x", "p", 1.0, 4e5, 4e6, annualization_days=1)
    rows = l2yield.simulate_sequential(pool, 0.0342, 1e7, 8)
    assert len(rows) == 8
    for j, row in enumerate(rows):
        assert row["pre_return"] == pytest.approx(l2yield.analytic_return_after(j, 0.1, 0.0342), rel=1e-10)
    assert l2yield.step_return(0.1, 0.0342) == pytest.approx(math.sqrt(0.1 * 0.0342), rel=1e-15)


def test_slippage():
    rho = l2yield.equilibrium_slippage(0.0347, 0.0005, 1e8, 1e5)
    x = l2yield.equilibrium_tvl(0.0005, 1e8, 0.0347) / 2
    assert rho == pytest.approx(1e5 / x, rel=1e-12)


def test_tick_math():
    assert l2yield.sqrt_price_at_tick(0) == 1.0
    assert l2yield.ticks_in_range(0.12, 10) == 229
    assert l2yield.tick_tvl(1e6, 0, 1.0, 10, 1.0) == pytest.approx(499.850034993001, rel=1e-9)


def test_ingest_fixture():
    out = l2yield.ingest_swaps(os.path.join(DATA, "swaps_fixture.csv"))
    assert len(out["snapshots"]) == 6
    assert out["errors"] and out["errors"][0].startswith("line 14")
    assert out["snapshots"][1]["tick_tvl_usd"] == pytest.approx(101669.12047826501508, rel=1e-9)
    with pytest.raises(l2yield.ParseError):
        l2yield.ingest_swaps(os.path.join(DATA, "swaps_fixture.csv"), strict=True)


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        l2yield.Pool("x", "p", 0.003, -1.0, 1e6)
    with pytest.raises(ValueError):
        l2yield.optimal_allocation([], 1e6, 0.0)

#include <fstream>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l2yield/allocator.hpp"
#include "l2yield/convergence.hpp"
#include "l2yield/errors.hpp"
#include "l2yield/ingest.hpp"
#include "l2yield/slippage.hpp"

namespace py = pybind11;
using namespace l2yield;

namespace {

PoolState make_pool(std::string chain, std::string pool_id, double fee, double daily_volume, double tvl,
                    int tick_count, int annualization_days, std::optional<double> quoted_return) {
  PoolState p;
  p.chain = std::move(chain);
  p.pool_id = std::move(pool_id);
  p.fee = fee;
  p.daily_volume = Money(daily_volume);
  p.tvl = Money(tvl);
  p.tick_count = tick_count;
  p.annualization_days = annualization_days;
  if (quoted_return) p.quoted_return = Rate(*quoted_return);
  validate(p);
  return p;
}

py::dict to_dict(const AllocationResult& r) {
  py::list pools;
  for (const auto& a : r.pools) {
    py::dict d;
    d["chain"] = a.chain;
    d["pool_id"] = a.pool_id;
    d["allocation"] = a.allocation.value();
    d["initial_return"] = a.initial_return.value();
    d["post_return"] = a.post_return.value();
    pools.append(d);
  }
  py::dict out;
  out["pools"] = pools;
  out["staking"] = r.staking.value();
  out["multiplier"] = r.multiplier.value();
  out["total_earnings"] = r.total_earnings.value();
  out["budget_binding"] = r.budget_binding;
  return out;
}

AllocationResult from_dict(const py::dict& d) {
  AllocationResult r;
  for (const auto& item : d["pools"].cast<py::list>()) {
    const auto p = item.cast<py::dict>();
    r.pools.push_back(PoolAllocation{p["chain"].cast<std::string>(), p["pool_id"].cast<std::string>(),
                                     Money(p["allocation"].cast<double>()), Rate(p["initial_return"].cast<double>()),
                                     Rate(p["post_return"].cast<double>())});
  }
  r.staking = Money(d["staking"].cast<double>());
  r.multiplier = Rate(d["multiplier"].cast<double>());
  r.total_earnings = Money(d["total_earnings"].cast<double>());
  r.budget_binding = d["budget_binding"].cast<bool>();
  return r;
}

TickScaling scaling(bool scale_by_ticks) {
  return scale_by_ticks ? TickScaling::kSpreadOverTicks : TickScaling::kCurrentTick;
}

py::dict snapshot_dict(const PoolSnapshot& s) {
  py::dict d;
  d["chain"] = s.chain;
  d["pool_id"] = s.pool_id;
  d["date"] = format_date(s.date);
  d["tick_tvl_usd"] = s.tick_tvl_usd.value();
  d["daily_volume_usd"] = s.daily_volume_usd.value();
  d["annualized_return"] = s.annualized_return.value();
  d["m"] = s.tick_count;
  d["concentration"] = s.concentration;
  d["usable"] = s.usable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Yield allocation across AMM pools and staking";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);

  py::class_<PoolState>(m, "Pool")
      .def(py::init(&make_pool), py::arg("chain"), py::arg("pool_id"), py::arg("fee"), py::arg("daily_volume"),
           py::arg("tvl"), py::arg("tick_count") = 1, py::arg("annualization_days") = kDefaultAnnualizationDays,
           py::arg("quoted_return") = py::none())
      .def_readonly("chain", &PoolState::chain)
      .def_readonly("pool_id", &PoolState::pool_id)
      .def_readonly("fee", &PoolState::fee)
      .def_property_readonly("daily_volume", [](const PoolState& p) { return p.daily_volume.value(); })
      .def_property_readonly("tvl", [](const PoolState& p) { return p.tvl.value(); })
      .def_readonly("tick_count", &PoolState::tick_count)
      .def_readonly("annualization_days", &PoolState::annualization_days)
      .def_property_readonly("initial_return", [](const PoolState& p) { return initial_return(p).value(); })
      .def("__repr__", [](const PoolState& p) {
        std::ostringstream os;
        os << "Pool(" << p.chain << '/' << p.pool_id << ", tvl=" << p.tvl.value() << ")";
        return os.str();
      });

  m.def("read_pools", [](const std::string& path, int days) { return read_pools_file(path, days); },
        py::arg("path"), py::arg("annualization_days") = kDefaultAnnualizationDays);

  m.def("cpmm_return", [](const PoolState& p, double w) { return cpmm_return(p, Money(w)).value(); });
  m.def("clmm_return", [](const PoolState& p, double w) { return clmm_return(p, Money(w)).value(); });
  m.def("allocation_for_pool", [](double tvl, double r0, double rs) {
    return allocation_for_pool(Money(tvl), Rate(r0), Rate(rs)).value();
  }, py::arg("tvl"), py::arg("r0"), py::arg("staking_rate"));

  m.def(
      "optimal_allocation",
      [](const std::vector<PoolState>& pools, double wealth, double rs, bool scale_by_ticks) {
        AllocatorOptions options;
        options.tick_scaling = scaling(scale_by_ticks);
        return to_dict(optimal_allocation(pools, LPConfig{Money(wealth), Rate(rs)}, options));
      },
      py::arg("pools"), py::arg("wealth"), py::arg("staking_rate"), py::arg("scale_by_ticks") = false);

  m.def(
      "oracle_maximize",
      [](const std::vector<PoolState>& pools, double wealth, double rs, int grid_steps) {
        OracleOptions options;
        options.grid_steps = grid_steps;
        return to_dict(oracle_maximize(pools, LPConfig{Money(wealth), Rate(rs)}, options));
      },
      py::arg("pools"), py::arg("wealth"), py::arg("staking_rate"), py::arg("grid_steps") = 100);

  m.def(
      "verify_kkt",
      [](const std::vector<PoolState>& pools, const py::dict& result, double wealth, double rs, double tol) {
        return verify_kkt(pools, from_dict(result), LPConfig{Money(wealth), Rate(rs)}, tol);
      },
      py::arg("pools"), py::arg("result"), py::arg("wealth"), py::arg("staking_rate"), py::arg("tol") = 1e-8);

  m.def("step_return", [](double previous, double rs) { return step_return(Rate(previous), Rate(rs)).rate.value(); });
  m.def("analytic_return_after",
        [](int j, double r0, double rs) { return analytic_return_after(j, Rate(r0), Rate(rs)).value(); });
  m.def(
      "simulate_sequential",
      [](const PoolState& pool, double rs, double wealth_per_lp, int num_lps) {
        py::list rows;
        for (const auto& s : simulate_sequential(pool, Rate(rs), Money(wealth_per_lp), num_lps).steps) {
          py::dict d;
          d["lp_index"] = s.lp_index;
          d["pre_return"] = s.pre_return.value();
          d["allocation"] = s.allocation.value();
          d["staking"] = s.staking.value();
          d["post_tvl"] = s.post_tvl.value();
          d["status"] = to_string(s.status);
          rows.append(d);
        }
        return rows;
      },
      py::arg("pool"), py::arg("staking_rate"), py::arg("wealth_per_lp"), py::arg("num_lps"));

  m.def("cpmm_price_impact", [](double reserve, double trade) { return cpmm_price_impact(Money(reserve), Money(trade)); });
  m.def(
      "equilibrium_slippage",
      [](double rs, double fee, double daily_volume, double trade_size, int days) {
        SlippageInput in;
        in.staking_rate = Rate(rs);
        in.fee = fee;
        in.daily_volume = Money(daily_volume);
        in.trade_size = Money(trade_size);
        in.annualization_days = days;
        return equilibrium_slippage(in);
      },
      py::arg("staking_rate"), py::arg("fee"), py::arg("daily_volume"), py::arg("trade_size"),
      py::arg("annualization_days") = kDefaultAnnualizationDays);
  m.def(
      "equilibrium_tvl",
      [](double fee, double daily_volume, double rs, int days) {
        return equilibrium_tvl(fee, Money(daily_volume), Rate(rs), days).value();
      },
      py::arg("fee"), py::arg("daily_volume"), py::arg("staking_rate"),
      py::arg("annualization_days") = kDefaultAnnualizationDays);

  m.def("sqrt_price_at_tick", &sqrt_price_at_tick);
  m.def("ticks_in_range", &ticks_in_range, py::arg("range_fraction"), py::arg("tick_spacing"));
  m.def(
      "tick_tvl",
      [](double liquidity, int tick, double sqrt_price, int spacing, double p0, double p1) {
        return tick_tvl(liquidity, tick, sqrt_price, spacing, Money(p0), Money(p1)).value();
      },
      py::arg("liquidity"), py::arg("tick"), py::arg("sqrt_price"), py::arg("tick_spacing"),
      py::arg("usd_price_token0"), py::arg("usd_price_token1") = 1.0);

  m.def(
      "ingest_swaps",
      [](const std::string& path, double range_fraction, double l2_concentration, bool strict) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open swaps file '" + path + "'");
        SwapParseOptions parse_options;
        parse_options.strict = strict;
        const auto parsed = parse_swaps(in, parse_options);
        MethodologyParams params;
        params.range_fraction = range_fraction;
        params.l2_concentration = l2_concentration;
        py::list snapshots;
        for (const auto& s : build_snapshots(parsed.events, params)) snapshots.append(snapshot_dict(s));
        py::list errors;
        for (const auto& d : parsed.errors) errors.append(d.to_string());
        py::list warnings;
        for (const auto& d : parsed.warnings) warnings.append(d.to_string());
        py::dict out;
        out["snapshots"] = snapshots;
        out["errors"] = errors;
        out["warnings"] = warnings;
        return out;
      },
      py::arg("path"), py::arg("range_fraction") = 0.12, py::arg("l2_concentration") = 1.75,
      py::arg("strict") = false);

#ifdef L2YIELD_VERSION
  m.attr("__version__") = L2YIELD_VERSION;
#endif
}

import csv

import numpy as np
import pytest

from inertia_value.domain import SchedulePoint, ValidationError, single_node_tree
from inertia_value.milp import OPTIMAL
from inertia_value.scenario import QuantileSpec, WindProcess, build_tree, daily_demand_profile
from inertia_value.scheduler import (
    ClassState, FleetState, SucConfig, build_suc, node_cost, rolling_run, solve_suc, verify_node,
)

Q3 = QuantileSpec((0.1, 0.5, 0.9))


def _point(system, n_up, sg, disp, wind=0.0, shed=0.0):
    k = len(system.classes)
    return SchedulePoint(0, tuple(n_up), tuple(sg), tuple(disp), (0.0,) * k, wind, shed)


def _cfg(system, **kw):
    base = dict(quantiles=Q3, wind=WindProcess(3000.0, seed=3), horizon=6)
    base.update(kw)
    return SucConfig(system, **base)


def _demand(hours):
    return daily_demand_profile(hours, 4500.0, 2500.0)


def test_node_cost_ccgt_example(gb):
    pt = _point(gb, (0, 1, 0), (0, 0, 0), (0, 500.0, 0))
    assert node_cost(pt, gb).total == pytest.approx(60909.0, abs=1e-9)


def test_node_cost_ocgt_example(gb):
    pt = _point(gb, (0, 0, 1), (0, 0, 1), (0, 0, 50.0))
    c = node_cost(pt, gb)
    assert c.total == pytest.approx(19747.5, abs=1e-9)
    assert c.startup == 0.0


def test_node_cost_zero(gb):
    assert node_cost(_point(gb, (0, 0, 0), (0, 0, 0), (0, 0, 0)), gb).total == 0.0


def test_node_cost_shed_and_dt(gb):
    pt = _point(gb, (0, 0, 0), (0, 0, 0), (0, 0, 0), shed=2.0)
    assert node_cost(pt, gb, dt=0.5).shed == pytest.approx(gb.params.voll)


def test_variable_count(gb10):
    tree = build_tree(WindProcess(3000.0), 1000.0, _demand(25), QuantileSpec(), 24)
    assert len(tree.nodes) == 169
    model, idx = build_suc(_cfg(gb10, quantiles=QuantileSpec(), horizon=24), tree)
    # per node: 4 variables per class plus wind and shed
    assert model.n_vars == 169 * (4 * 3 + 2) == idx.n_variables


def test_no_inertia_rows_when_disabled(gb10):
    tree = single_node_tree(3500.0, 1000.0)
    model, idx = build_suc(_cfg(gb10, rocof=False, nadir=False, qss=False), tree)
    names = " ".join(r.name for r in model.rows)
    assert "rocof" not in names and "nadir" not in names and "qss" not in names
    assert idx.cut_sets == {}
    model, _ = build_suc(_cfg(gb10), tree)
    names = " ".join(r.name for r in model.rows)
    assert "rocof" in names and "nadir" in names and "qss" in names


def test_nuclear_provides_no_response(gb10):
    sol = solve_suc(_cfg(gb10), single_node_tree(3000.0, 500.0))
    assert sol.status == OPTIMAL
    assert sol.point(0).response[0] == 0.0
    assert sol.point(0).n_up[0] == gb10.classes[0].unit_count


def test_balance_holds_at_every_node(gb10):
    tree = build_tree(WindProcess(3000.0, seed=1), 1500.0, _demand(7), Q3, 6)
    sol = solve_suc(_cfg(gb10), tree)
    for n in range(len(tree.nodes)):
        pt = sol.point(n)
        assert sum(pt.dispatch) + pt.wind_used + pt.shed == pytest.approx(tree.nodes[n].demand, abs=1e-5)
        assert pt.wind_used <= tree.nodes[n].wind_available + 1e-6


def test_root_objective_matches_node_cost(gb10):
    # single node: the model objective and node_cost price the same point
    sol = solve_suc(_cfg(gb10), single_node_tree(4000.0, 800.0))
    assert sol.objective == pytest.approx(node_cost(sol.point(0), gb10).total, rel=1e-9)


def test_extra_inertia_never_raises_cost_lp(gb10):
    cfg = _cfg(gb10, relax_commitment=True, max_extra_inertia=400.0)
    tree = single_node_tree(2800.0, 2500.0)
    costs = [solve_suc(cfg.with_(extra_inertia=x), tree).objective for x in (0.0, 50.0, 150.0, 400.0)]
    assert np.all(np.diff(costs) <= 1e-6 * costs[0])


def test_looser_rocof_and_disabled_constraints(gb10):
    tree = build_tree(WindProcess(3000.0, seed=2), 2500.0, _demand(7), Q3, 6)
    cost = {}
    for r in (0.25, 0.5):
        cost[r] = solve_suc(_cfg(gb10.with_params(rocof_max=r)), tree).objective
    free = solve_suc(_cfg(gb10, rocof=False, nadir=False, qss=False), tree).objective
    assert cost[0.5] <= cost[0.25] + 1e-6 * cost[0.25]
    assert free <= cost[0.5] + 1e-6 * cost[0.5]


def test_verified_schedule_is_frequency_secure(gb10):
    tree = single_node_tree(2600.0, 2000.0)
    sol = solve_suc(_cfg(gb10), tree)
    chk = verify_node(sol, 0)
    assert chk.nadir >= -gb10.params.delta_f_max - 5e-3
    assert chk.max_rocof <= gb10.params.rocof_max + 1e-6


def test_steady_state_without_wind(gb10):
    # constant demand and no wind: commitment settles and repeats
    cfg = _cfg(gb10, wind=WindProcess(0.0), horizon=4)
    gb0 = gb10.with_params(wind_capacity=0.0)
    cfg = cfg.with_(system=gb0)
    d = np.full(14, 3800.0)
    res = rolling_run(cfg, d, np.zeros(14), 10, deterministic=True)
    assert not res.aborted
    last = [h.point.n_up for h in res.hours[-4:]]
    assert all(x == last[0] for x in last)
    assert res.hours[-1].cost.startup == 0.0


def test_degenerate_spread_equals_deterministic(gb10):
    cfg = _cfg(gb10, wind=WindProcess(3000.0, sigma_step=0.0, seed=4), horizon=4)
    d = _demand(12)
    w = np.full(12, 1200.0)
    a = rolling_run(cfg, d, w, 8)
    b = rolling_run(cfg, d, w, 8, deterministic=True)
    assert a.total_cost == pytest.approx(b.total_cost, rel=1e-9)


def test_rolling_cost_identity(gb10):
    cfg = _cfg(gb10, horizon=4)
    d = _demand(12)
    w = cfg.wind.sample(12)
    res = rolling_run(cfg, d, w, 8)
    total = 0.0
    for h in res.hours:
        for g, n, sg, p in zip(gb10.classes, h.point.n_up, h.point.n_start_gen, h.point.dispatch):
            total += g.startup_cost * sg + g.no_load_cost * n + (g.marginal_cost + 0.15 * g.emissions_rate) * p
        total += gb10.params.voll * h.point.shed
    assert res.total_cost == pytest.approx(total, rel=1e-9)


def test_rolling_rejects_short_traces(gb10):
    with pytest.raises(ValidationError):
        rolling_run(_cfg(gb10), _demand(5), np.zeros(5), 3)


def test_rolling_rejects_wind_above_capacity(gb10):
    cfg = _cfg(gb10)
    with pytest.raises(ValidationError):
        rolling_run(cfg, _demand(20), np.full(20, 1e6), 3)


def test_fleet_state_errors(gb10):
    bad = FleetState((ClassState(99), ClassState(0), ClassState(0)))
    with pytest.raises(ValidationError):
        bad.check(gb10)
    with pytest.raises(ValidationError):
        FleetState((ClassState(6),)).check(gb10)


def test_run_csv(gb10, tmp_path):
    cfg = _cfg(gb10, horizon=3)
    d = _demand(8)
    res = rolling_run(cfg, d, cfg.wind.sample(8), 2)
    path = tmp_path / "run.csv"
    res.write_csv(path)
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 2
    assert {"hour", "H", "R", "cost_total", "nadir", "n_up_nuclear"} <= set(rows[0])
    assert float(rows[1]["cost_total"]) == pytest.approx(res.hours[1].cost.total, rel=1e-9)

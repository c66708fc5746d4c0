import csv
import math

import numpy as np
import pytest

from inertia_value.domain import ValidationError
from inertia_value.scenario import QuantileSpec, WindProcess, daily_demand_profile
from inertia_value.scheduler import SucConfig
from inertia_value.valuation import (
    ValuationRecord, annual_value, binding_constraint_probe, instantaneous_value, marginal_curve, marginal_value,
    snapshot, write_grid, write_records,
)


def _cfg(system, rocof=0.5, **kw):
    return SucConfig(system.with_params(rocof_max=rocof), relax_commitment=True, **kw)


def test_marginal_curve_hand_example():
    c = marginal_curve([0, 1, 2, 4], [100.0, 90.0, 85.0, 85.0], epsilon=0.5)
    assert c.savings == (0.0, 10.0, 15.0, 15.0)
    assert c.marginal == (10.0, 5.0, 0.0)
    assert c.saturation == 4.0
    assert c.midpoints == (0.5, 1.5, 3.0)


def test_marginal_curve_never_saturates():
    assert marginal_curve([0, 1], [10.0, 5.0], epsilon=1.0).saturation is None


def test_marginal_grid_checks(gb10):
    cfg = _cfg(gb10)
    with pytest.raises(ValidationError):
        marginal_value(cfg, [1.0, 2.0], condition=(3000.0, 1000.0))
    with pytest.raises(ValidationError):
        marginal_value(cfg, [0.0, 2.0, 2.0], condition=(3000.0, 1000.0))
    with pytest.raises(ValidationError):
        marginal_value(cfg, [0.0, 2.0])
    single = marginal_value(cfg, [0.0], condition=(3000.0, 1000.0))
    assert single.marginal == () and single.saturation is None


def test_snapshot_saturation_grows_with_wind(gb10):
    grid = list(range(0, 601, 25))
    sat = {}
    for w in (1000.0, 3000.0):
        c = marginal_value(_cfg(gb10), grid, condition=(4000.0, w), epsilon=0.01)
        m = np.array(c.marginal)
        assert np.all(np.diff(m) <= 0.01 * m.max())
        assert c.saturation is not None
        assert np.all(m[grid.index(int(c.saturation)) - 1:] < 0.01)
        sat[w] = c.saturation
    assert sat[3000.0] > sat[1000.0]


def test_probe_names_binding_constraint(gb10):
    assert binding_constraint_probe(snapshot(_cfg(gb10, 0.25), 4500.0, 5000.0)) == "rocof"
    assert binding_constraint_probe(snapshot(_cfg(gb10, 0.5), 3000.0, 5000.0)) == "nadir"
    free = _cfg(gb10).with_(rocof=False, nadir=False, qss=False)
    assert binding_constraint_probe(snapshot(free, 3000.0, 5000.0)) == "none"


def test_instantaneous_grid_shape_and_infeasible_cell(gb10):
    grid = instantaneous_value(_cfg(gb10), [1500.0, 4000.0], [0.0, 3000.0])
    assert [[r.demand for r in row] for row in grid] == [[1500.0, 1500.0], [4000.0, 4000.0]]
    low = grid[0][0]
    assert math.isnan(low.value) and low.binding == "infeasible" and low.shed
    hi = grid[1][1]
    assert hi.value >= 0 and hi.curtails
    assert not grid[1][0].curtails


def test_instantaneous_workers_agree(gb10):
    a = instantaneous_value(_cfg(gb10), [3000.0], [1000.0, 4000.0])
    b = instantaneous_value(_cfg(gb10), [3000.0], [1000.0, 4000.0], workers=2)
    assert [r.value for r in a[0]] == [r.value for r in b[0]]


def test_annual_value_small(gb10):
    d = daily_demand_profile(20, 4500.0, 2500.0)
    cfg = _cfg(gb10, quantiles=QuantileSpec((0.5,)), horizon=4, wind=WindProcess(0.0, seed=7))
    recs = annual_value(cfg, [1000.0, 3000.0], 12, d, rocof_values=(0.5,), extra=1.0)
    assert [r.wind_capacity for r in recs] == [1000.0, 3000.0]
    assert all(r.value >= -1e-6 * r.baseline_cost for r in recs)
    with pytest.raises(ValidationError):
        annual_value(cfg, [1000.0], 18, d)


def test_write_records_and_grid(tmp_path):
    recs = [[ValuationRecord("instantaneous", 0.5, 1.0, 10.0, 7.5, demand=d, wind=w) for w in (0.0, 5.0)]
            for d in (1.0, 2.0)]
    write_records([r for row in recs for r in row], tmp_path / "long.csv")
    rows = list(csv.DictReader((tmp_path / "long.csv").open()))
    assert len(rows) == 4 and float(rows[0]["value"]) == 2.5
    write_grid(recs, tmp_path / "grid.csv")
    lines = (tmp_path / "grid.csv").read_text().splitlines()
    assert lines[0] == "demand,wind_0.000000,wind_5.000000"
    assert lines[2].startswith("2.000000,2.500000")


def test_unit_value():
    r = ValuationRecord("annual", 0.5, 2.0, 10.0, 4.0)
    assert r.value == 6.0 and r.unit_value == 3.0
    assert ValuationRecord("annual", 0.5, 0.0, 1.0, 1.0).unit_value == 0.0

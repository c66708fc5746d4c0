"""Value-of-inertia studies: annual value against wind capacity, instantaneous
value over a demand/wind grid, and the marginal value of growing amounts of
extra inertia.

Every study compares the same scheduling problem with and without freely
provided inertia. The studies default to the linear relaxation of the clustered
commitment counts: with whole units, one MW s^2 either retires a unit or does
nothing, so the cost difference is a step function of the extra inertia.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import frequency as fq
from .domain import ValidationError, single_node_tree
from .milp import OPTIMAL
from .scheduler import SucConfig, SucSolution, rolling_run, solve_suc

BINDING_TOL = 1e-6


@dataclass(frozen=True)
class ValuationRecord:
    study: str
    rocof_max: float
    extra_inertia: float
    baseline_cost: float
    cost_with_extra: float
    wind_capacity: float | None = None
    demand: float | None = None
    wind: float | None = None
    curtailed_baseline: float = 0.0
    curtailed_extra: float = 0.0
    response_baseline: float = 0.0
    response_extra: float = 0.0
    shed: bool = False
    binding: str = ""

    @property
    def value(self) -> float:
        return self.baseline_cost - self.cost_with_extra

    @property
    def unit_value(self) -> float:
        """Saving per MW s^2 of extra inertia."""
        return self.value / self.extra_inertia if self.extra_inertia else 0.0

    @property
    def curtails(self) -> bool:
        return self.curtailed_baseline > 1e-6


RECORD_COLUMNS = [
    "study", "wind_capacity", "demand", "wind", "rocof_max", "extra_inertia", "baseline_cost", "cost_with_extra",
    "value", "curtailed_baseline", "curtailed_extra", "response_baseline", "response_extra", "shed", "binding",
]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def write_records(records: Iterable[ValuationRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([_cell(getattr(r, c)) for c in RECORD_COLUMNS])


def write_grid(grid: Sequence[Sequence[ValuationRecord]], path) -> None:
    """Surface-plot layout: first column demand, one column per wind level, cells hold the value."""
    winds = [rec.wind for rec in grid[0]]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["demand"] + [f"wind_{_cell(float(x))}" for x in winds])
        for row in grid:
            w.writerow([_cell(row[0].demand)] + [_cell(rec.value) for rec in row])


# --------------------------------------------------------------------------
# which frequency constraint binds


def constraint_slacks(sol: SucSolution, node: int = 0) -> dict[str, float]:
    """Relative slack of each active frequency constraint at ``node``."""
    cfg = sol.config
    ix = sol.index
    h = sol.inertia(node)
    r = sol.response(node)
    out: dict[str, float] = {}
    if cfg.rocof:
        out["rocof"] = (h - ix.rocof_floor) / max(ix.rocof_floor, 1.0)
    if cfg.nadir and node in ix.cut_sets:
        need = ix.cut_sets[node].bound(h)
        out["nadir"] = (r - need) / max(abs(need), 1.0)
    if cfg.qss and node in ix.qss_floor:
        floor = ix.qss_floor[node]
        out["qss"] = (r - floor) / max(floor, 1.0)
    return out


def binding_constraint_probe(sol: SucSolution, node: int = 0, tol: float = BINDING_TOL) -> str:
    """Name of the tightest frequency constraint at ``node``, or ``"none"``.

    Ties are resolved in the order rocof, nadir, qss: inertia at the RoCoF floor
    is pinned there whatever the response does.
    """
    slacks = constraint_slacks(sol, node)
    tight = [name for name in ("rocof", "nadir", "qss") if name in slacks and slacks[name] <= tol]
    return tight[0] if tight else "none"


# --------------------------------------------------------------------------
# helpers


def _check_solved(sol: SucSolution, what: str) -> None:
    if sol.status != OPTIMAL or sol.solution.x is None:
        raise RuntimeError(f"{what}: solver returned {sol.status}")


def _map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*items)))


def _with_rocof(config: SucConfig, rocof_max: float) -> SucConfig:
    return config.with_(system=config.system.with_params(rocof_max=rocof_max))


# --------------------------------------------------------------------------
# annual value against installed wind


def _annual_point(config: SucConfig, capacity: float, rocof: float, demand: np.ndarray, duration: int,
                  extra: float) -> ValuationRecord:
    cfg = _with_rocof(config, rocof).with_(wind=config.wind.with_capacity(capacity),
                                          max_extra_inertia=max(config.max_extra_inertia, extra))
    cfg = cfg.with_(system=cfg.system.with_params(wind_capacity=capacity))
    wind = cfg.wind.sample(len(demand))
    runs = []
    for x in (0.0, extra):
        res = rolling_run(cfg.with_(extra_inertia=x), demand, wind, duration)
        if res.aborted:
            raise RuntimeError(f"annual study at {capacity} MW wind: {res.message}")
        runs.append(res)
    base, more = runs
    return ValuationRecord(
        "annual", rocof, extra, base.total_cost, more.total_cost, wind_capacity=capacity,
        curtailed_baseline=base.curtailed_energy, curtailed_extra=more.curtailed_energy,
        response_baseline=sum(h.response for h in base.hours), response_extra=sum(h.response for h in more.hours),
        shed=any(h.point.shed > 1e-6 for h in base.hours + more.hours),
    )


def annual_value(
    config: SucConfig,
    wind_capacities: Sequence[float],
    duration: int,
    demand_trace: Sequence[float],
    *,
    rocof_values: Sequence[float] = (0.25, 0.5),
    extra: float = 1.0,
    workers: int = 1,
) -> list[ValuationRecord]:
    """Cost saving from ``extra`` MW s^2 over a rolling run, per wind capacity and RoCoF limit.

    Wind traces share one seeded capacity-factor path, scaled to each capacity.
    """
    demand = np.asarray(demand_trace, dtype=float)
    if duration < 1 or duration + config.horizon > len(demand):
        raise ValidationError(f"duration {duration} h plus the {config.horizon} h horizon exceeds the demand trace")
    items = [(config, float(c), float(r), demand, duration, extra) for r in rocof_values for c in wind_capacities]
    return _map(_annual_point, items, workers)


# --------------------------------------------------------------------------
# instantaneous value over demand and wind


def snapshot(config: SucConfig, demand: float, wind: float, extra: float = 0.0) -> SucSolution:
    """Single-hour schedule for a fixed demand/wind condition (no history, no forecast)."""
    tree = single_node_tree(demand, wind)
    sol = solve_suc(config.with_(extra_inertia=extra), tree)
    _check_solved(sol, f"snapshot at demand {demand}, wind {wind}")
    return sol


def _instant_cell(config: SucConfig, demand: float, wind: float, extra: float) -> ValuationRecord:
    cfg = config.with_(max_extra_inertia=max(config.max_extra_inertia, extra))
    try:
        base = snapshot(cfg, demand, wind)
        more = snapshot(cfg, demand, wind, extra)
    except RuntimeError:
        # must-run and minimum stable output can exceed demand when there is no wind to spill
        return ValuationRecord("instantaneous", cfg.params.rocof_max, extra, math.nan, math.nan,
                               demand=demand, wind=wind, shed=True, binding="infeasible")
    pb, pm = base.point(0), more.point(0)
    return ValuationRecord(
        "instantaneous", cfg.params.rocof_max, extra, base.objective, more.objective, demand=demand, wind=wind,
        curtailed_baseline=max(0.0, wind - pb.wind_used), curtailed_extra=max(0.0, wind - pm.wind_used),
        response_baseline=pb.total_response, response_extra=pm.total_response,
        shed=pb.shed > 1e-6 or pm.shed > 1e-6, binding=binding_constraint_probe(base),
    )


def instantaneous_value(
    config: SucConfig,
    demand_grid: Sequence[float],
    wind_grid: Sequence[float],
    *,
    extra: float = 1.0,
    workers: int = 1,
) -> list[list[ValuationRecord]]:
    """Records indexed ``[i_demand][i_wind]``."""
    if not len(demand_grid) or not len(wind_grid):
        raise ValidationError("demand and wind grids must be non-empty")
    cap = max(config.params.wind_capacity, max(wind_grid))
    cfg = config.with_(system=config.system.with_params(wind_capacity=cap))
    items = [(cfg, float(d), float(w), extra) for d in demand_grid for w in wind_grid]
    flat = _map(_instant_cell, items, workers)
    nw = len(wind_grid)
    return [flat[i * nw:(i + 1) * nw] for i in range(len(demand_grid))]


# --------------------------------------------------------------------------
# marginal value of extra inertia


@dataclass(frozen=True)
class MarginalCurve:
    extra: tuple[float, ...]
    savings: tuple[float, ...]
    marginal: tuple[float, ...]  # per MW s^2, one entry per step of the grid
    epsilon: float
    saturation: float | None  # first grid level whose incoming marginal is below epsilon

    @property
    def midpoints(self) -> tuple[float, ...]:
        return tuple(0.5 * (a + b) for a, b in zip(self.extra[:-1], self.extra[1:]))


def marginal_curve(extra_grid: Sequence[float], costs: Sequence[float], epsilon: float) -> MarginalCurve:
    grid = [float(x) for x in extra_grid]
    savings = [costs[0] - c for c in costs]
    marginal = [(savings[i] - savings[i - 1]) / (grid[i] - grid[i - 1]) for i in range(1, len(grid))]
    sat = next((grid[i + 1] for i, m in enumerate(marginal) if m < epsilon), None)
    return MarginalCurve(tuple(grid), tuple(savings), tuple(marginal), epsilon, sat)


def _check_grid(extra_grid: Sequence[float]) -> None:
    if not len(extra_grid) or extra_grid[0] != 0:
        raise ValidationError("extra-inertia grid must start at 0")
    if any(b <= a for a, b in zip(extra_grid[:-1], extra_grid[1:])):
        raise ValidationError("extra-inertia grid must be strictly increasing")


def _rolling_cost(config: SucConfig, extra: float, demand, wind, duration) -> float:
    res = rolling_run(config.with_(extra_inertia=extra), demand, wind, duration)
    if res.aborted:
        raise RuntimeError(f"marginal study at extra {extra}: {res.message}")
    return res.total_cost


def _snapshot_cost(config: SucConfig, extra: float, demand: float, wind: float) -> float:
    return snapshot(config, demand, wind, extra).objective


def marginal_value(
    config: SucConfig,
    extra_grid: Sequence[float],
    *,
    demand_trace: Sequence[float] | None = None,
    wind_trace: Sequence[float] | None = None,
    duration: int | None = None,
    condition: tuple[float, float] | None = None,
    epsilon: float = 1e-3,
    workers: int = 1,
) -> MarginalCurve:
    """Savings and marginal value along ``extra_grid``.

    Either a rolling run (``demand_trace``, ``duration``; wind drawn from the
    config's process unless ``wind_trace`` is given) or a single hour at
    ``condition = (demand, wind)``. ``epsilon`` is in £ per MW s^2 over the
    whole study.
    """
    _check_grid(list(extra_grid))
    if len(extra_grid) == 1:
        return MarginalCurve((0.0,), (0.0,), (), epsilon, None)
    # identical cut sets for every grid level
    cfg = config.with_(max_extra_inertia=max(config.max_extra_inertia, float(extra_grid[-1])))
    if condition is not None:
        d, w = condition
        cap = max(cfg.params.wind_capacity, w)
        cfg = cfg.with_(system=cfg.system.with_params(wind_capacity=cap))
        items = [(cfg, float(x), float(d), float(w)) for x in extra_grid]
        costs = _map(_snapshot_cost, items, workers)
    else:
        if demand_trace is None or duration is None:
            raise ValidationError("rolling marginal study needs demand_trace and duration")
        demand = np.asarray(demand_trace, dtype=float)
        wind = cfg.wind.sample(len(demand)) if wind_trace is None else np.asarray(wind_trace, dtype=float)
        items = [(cfg, float(x), demand, wind, duration) for x in extra_grid]
        costs = _map(_rolling_cost, items, workers)
    return marginal_curve(extra_grid, costs, epsilon)


__all__ = [
    "ValuationRecord", "annual_value", "instantaneous_value", "marginal_value", "marginal_curve", "MarginalCurve",
    "binding_constraint_probe", "constraint_slacks", "snapshot", "write_records", "write_grid", "RECORD_COLUMNS",
]

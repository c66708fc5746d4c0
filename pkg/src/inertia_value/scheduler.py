"""Inertia-dependent stochastic unit commitment over a scenario tree, and the
rolling-planning simulation that commits only the root decisions each hour."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import frequency as fq
from .domain import PowerSystem, ScenarioTree, SchedulePoint, ValidationError
from .milp import GAP_LIMIT, OPTIMAL, MilpModel, MilpSolution, get_backend
from .scenario import QuantileSpec, WindProcess, build_chain, build_tree

log = logging.getLogger(__name__)


class SchedulingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SucConfig:
    system: PowerSystem
    quantiles: QuantileSpec = field(default_factory=QuantileSpec)
    wind: WindProcess = field(default_factory=lambda: WindProcess(0.0))
    horizon: int = 24
    extra_inertia: float = 0.0
    rocof: bool = True
    nadir: bool = True
    qss: bool = True
    n_cuts: int = 16
    # upper end of the tangent range is full-fleet inertia plus this much extra
    max_extra_inertia: float = 0.0
    backend: str = "highs"
    gap_tol: float = 1e-6
    relax_commitment: bool = False
    verify: bool = True
    max_refinements: int = 3
    verify_tol: float = 5e-3

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValidationError("SUC config: field 'horizon' must be at least 1")
        if self.extra_inertia < 0:
            raise ValidationError("SUC config: field 'extra_inertia' must be non-negative")
        if self.n_cuts < 2:
            raise ValidationError("SUC config: field 'n_cuts' must be at least 2")

    @property
    def params(self):
        return self.system.params

    def with_(self, **changes) -> "SucConfig":
        return replace(self, **changes)


# --------------------------------------------------------------------------
# inter-temporal state carried between rolling steps


@dataclass(frozen=True)
class ClassState:
    n_up: float
    started: tuple[float, ...] = ()  # units that began generating, oldest first
    stopped: tuple[float, ...] = ()
    # starts already decided for the coming hours (index 0 = the next root); None = not yet planned
    pending: tuple[float, ...] | None = None


@dataclass(frozen=True)
class FleetState:
    classes: tuple[ClassState, ...]

    def check(self, system: PowerSystem) -> None:
        if len(self.classes) != len(system.classes):
            raise ValidationError("fleet state does not match the fleet")
        for g, s in zip(system.classes, self.classes):
            if not 0 <= s.n_up <= g.unit_count:
                raise ValidationError(f"fleet state: {g.name!r} has {s.n_up} units online, fleet has {g.unit_count}")
            if s.pending is not None and any(p < 0 or p > g.unit_count for p in s.pending):
                raise ValidationError(f"fleet state: pending starts for {g.name!r} out of range")


# --------------------------------------------------------------------------
# cost accounting


@dataclass(frozen=True)
class CostBreakdown:
    startup: float = 0.0
    no_load: float = 0.0
    marginal: float = 0.0
    emissions: float = 0.0
    shed: float = 0.0

    @property
    def total(self) -> float:
        return self.startup + self.no_load + self.marginal + self.emissions + self.shed

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(
            self.startup + other.startup, self.no_load + other.no_load, self.marginal + other.marginal,
            self.emissions + other.emissions, self.shed + other.shed,
        )


def node_cost(point: SchedulePoint, system: PowerSystem, dt: float = 1.0) -> CostBreakdown:
    """Operating cost of one node: startups plus dt * (no-load + energy + emissions) plus shed penalty."""
    p = system.params
    startup = no_load = marginal = emissions = 0.0
    for g, n, sg, disp in zip(system.classes, point.n_up, point.n_start_gen, point.dispatch):
        startup += g.startup_cost * sg
        no_load += dt * g.no_load_cost * n
        marginal += dt * g.marginal_cost * disp
        emissions += dt * p.emissions_price * g.emissions_rate / 1000.0 * disp
    return CostBreakdown(startup, no_load, marginal, emissions, dt * p.voll * point.shed)


# --------------------------------------------------------------------------
# model assembly


@dataclass
class SucIndex:
    """Variable ids of the SUC model: arrays indexed [node, class] or [node]."""

    n_up: np.ndarray
    n_sg: np.ndarray
    dispatch: np.ndarray
    response: np.ndarray
    wind_used: np.ndarray
    shed: np.ndarray
    inertia_coef: np.ndarray  # MW s^2 per online unit, by class
    inertia_const: float  # -loss + extra, MW s^2
    k_star: dict[int, float]
    cut_sets: dict[int, fq.NadirCutSet]
    rocof_floor: float
    qss_floor: dict[int, float]

    @property
    def n_variables(self) -> int:
        return int(self.n_up.size + self.n_sg.size + self.dispatch.size + self.response.size
                   + self.wind_used.size + self.shed.size)


def inertia_range(config: SucConfig, k_star: float) -> tuple[float, float]:
    """Tangent range [h_floor, h_max] for the nadir cuts."""
    params = config.params
    system = config.system
    h_max = system.full_inertia + max(config.max_extra_inertia, config.extra_inertia)
    if config.rocof:
        h_floor = fq.rocof_inertia_floor(params.p_loss_max, params.rocof_max)
    else:
        r_cap = sum(g.unit_count * g.max_response for g in system.classes)
        h_floor = k_star / r_cap if r_cap > 0 else 0.01 * h_max
    h_floor = min(h_floor, 0.5 * h_max)
    return h_floor, h_max


def k_star_for(config: SucConfig, demand: float) -> float:
    params = config.params
    h_lo = fq.rocof_inertia_floor(params.p_loss_max, params.rocof_max)
    h_hi = max(config.system.full_inertia + config.max_extra_inertia, 2.0 * h_lo)
    return fq.nadir_k_star(params, demand, h_bounds=(h_lo, h_hi))


def build_suc(
    config: SucConfig,
    tree: ScenarioTree,
    fleet_state: FleetState | None = None,
    extra_tangents: dict[int, Sequence[float]] | None = None,
) -> tuple[MilpModel, SucIndex]:
    """Assemble the SUC MILP. ``fleet_state=None`` means no history (free initial commitment)."""
    system = config.system
    params = system.params
    classes = system.classes
    n_nodes, n_cls = len(tree), len(classes)
    if fleet_state is not None:
        fleet_state.check(system)
    integer = not config.relax_commitment
    m = MilpModel("suc")

    idx_up = np.zeros((n_nodes, n_cls), dtype=np.int64)
    idx_sg = np.zeros_like(idx_up)
    idx_p = np.zeros_like(idx_up)
    idx_r = np.zeros_like(idx_up)
    idx_w = np.zeros(n_nodes, dtype=np.int64)
    idx_s = np.zeros(n_nodes, dtype=np.int64)
    for node in tree:
        n = node.id
        for c, g in enumerate(classes):
            lo_up = g.unit_count if g.must_run else 0
            idx_up[n, c] = m.add_var(f"n_up[{n},{g.name}]", lo_up, g.unit_count, integer)
            idx_sg[n, c] = m.add_var(f"n_sg[{n},{g.name}]", 0, 0 if g.must_run else g.unit_count, integer)
            idx_p[n, c] = m.add_var(f"p[{n},{g.name}]", 0, g.unit_count * g.p_max)
            idx_r[n, c] = m.add_var(f"r[{n},{g.name}]", 0, g.unit_count * g.max_response)
        idx_w[n] = m.add_var(f"wind[{n}]", 0, node.wind_available)
        idx_s[n] = m.add_var(f"shed[{n}]", 0, node.demand)

    # start pipeline: the starts generating at lead k were decided at lead k - startup_time
    leads = [int(round(node.lead_time)) for node in tree]
    by_lead: dict[int, list[int]] = {}
    for node in tree:
        by_lead.setdefault(leads[node.id], []).append(node.id)
    for c, g in enumerate(classes):
        if g.must_run:
            continue
        st = g.startup_time
        state = fleet_state.classes[c] if fleet_state is not None else None
        for k, members in sorted(by_lead.items()):
            if k == 0 and state is None:
                m.fix(idx_sg[members[0], c], 0.0)
                continue
            if k < st and state is not None and state.pending is not None:
                fixed = state.pending[k] if k < len(state.pending) else 0.0
                for n in members:
                    m.fix(idx_sg[n, c], fixed)
            elif k <= st:
                # decided at (or before) the root: identical on every branch
                for n in members[1:]:
                    m.add_row([idx_sg[n, c], idx_sg[members[0], c]], [1.0, -1.0], "==", 0.0, f"nonant[{n},{g.name}]")

    # objective
    for node in tree:
        n, pi, dt = node.id, node.probability, node.time_step_hours
        for c, g in enumerate(classes):
            energy = g.marginal_cost + params.emissions_price * g.emissions_rate / 1000.0
            if g.startup_cost:
                m.objective[int(idx_sg[n, c])] = pi * g.startup_cost
            if g.no_load_cost:
                m.objective[int(idx_up[n, c])] = pi * dt * g.no_load_cost
            if energy:
                m.objective[int(idx_p[n, c])] = pi * dt * energy
        m.objective[int(idx_s[n])] = pi * dt * params.voll

    ancestors = {node.id: tree.ancestors(node.id) for node in tree}

    def chain_below(n: int, depth: int) -> list[int]:
        out, cur = [], n
        for _ in range(depth):
            kids = tree.children(cur)
            if not kids:
                break
            cur = kids[0]
            out.append(cur)
        return out

    for node in tree:
        n = node.id
        parent = node.parent
        anc = ancestors[n]
        for c, g in enumerate(classes):
            up, sg, p, r = int(idx_up[n, c]), int(idx_sg[n, c]), int(idx_p[n, c]), int(idx_r[n, c])
            tag = f"{n},{g.name}"
            # dispatch window, headroom, response capability
            m.add_row([p, up], [1.0, -g.p_min_stable], ">=", 0.0, f"pmin[{tag}]")
            m.add_row([p, r, up], [1.0, 1.0, -g.p_max], "<=", 0.0, f"headroom[{tag}]")
            if g.max_response > 0:
                m.add_row([r, up], [1.0, -g.max_response], "<=", 0.0, f"rmax[{tag}]")
                m.add_row([r, p, up], [1.0, g.response_slope, -g.response_slope * g.p_max], "<=", 0.0, f"rslope[{tag}]")
            else:
                m.fix(r, 0.0)
            if g.must_run:
                continue
            state = fleet_state.classes[c] if fleet_state is not None else None
            has_prev = parent is not None or state is not None
            if has_prev:
                # stopped(n) = up(prev) + sg(n) - up(n) in [0, up(prev)]
                if parent is not None:
                    prev_idx, prev_const = [int(idx_up[parent, c])], 0.0
                else:
                    prev_idx, prev_const = [], float(state.n_up)
                m.add_row(prev_idx + [sg, up], [1.0] * len(prev_idx) + [1.0, -1.0], ">=", -prev_const, f"stop_lo[{tag}]")
                m.add_row([up, sg], [1.0, -1.0], ">=", 0.0, f"stop_hi[{tag}]")
            # minimum up time: units that started within the window stay online
            if g.min_up_time > 0:
                window = anc[: g.min_up_time]
                ids = [int(idx_sg[a, c]) for a in window]
                hist = 0.0
                missing = g.min_up_time - len(window)
                if missing > 0 and state is not None:
                    hist = float(sum(state.started[-missing:])) if state.started else 0.0
                m.add_row([up] + ids, [1.0] + [-1.0] * len(ids), ">=", hist, f"minup[{tag}]")
            # minimum down time: units stopped within the window stay offline
            if g.min_down_time > 0:
                coefs: dict[int, float] = {up: 1.0}
                const = 0.0
                window = anc[: g.min_down_time]
                for a in window:
                    a_parent = tree[a].parent
                    if a_parent is None and state is None:
                        continue
                    # stopped(a) = up(prev(a)) + sg(a) - up(a)
                    if a_parent is not None:
                        coefs[int(idx_up[a_parent, c])] = coefs.get(int(idx_up[a_parent, c]), 0.0) + 1.0
                    else:
                        const += state.n_up
                    coefs[int(idx_sg[a, c])] = coefs.get(int(idx_sg[a, c]), 0.0) + 1.0
                    coefs[int(idx_up[a, c])] = coefs.get(int(idx_up[a, c]), 0.0) - 1.0
                missing = g.min_down_time - len(window)
                if missing > 0 and state is not None and state.stopped:
                    const += float(sum(state.stopped[-missing:]))
                keys = [k for k, v in coefs.items() if v != 0.0]
                m.add_row(keys, [coefs[k] for k in keys], "<=", g.unit_count - const, f"mindown[{tag}]")
            # units in the start-up pipeline are offline but unavailable
            if g.startup_time > 0:
                ahead = chain_below(n, g.startup_time)
                if ahead:
                    ids = [int(idx_sg[d, c]) for d in ahead]
                    m.add_row([up] + ids, [1.0] * (1 + len(ids)), "<=", g.unit_count, f"pipeline[{tag}]")

        # power balance
        ids = [int(i) for i in idx_p[n]] + [int(idx_w[n]), int(idx_s[n])]
        m.add_row(ids, [1.0] * len(ids), "==", node.demand, f"balance[{n}]")

    # frequency security
    inertia_coef = np.array([g.inertia_per_unit / params.f0 for g in classes])
    inertia_const = -params.p_loss_max * params.h_loss_max / params.f0 + config.extra_inertia
    rocof_floor = fq.rocof_inertia_floor(params.p_loss_max, params.rocof_max)
    k_stars: dict[int, float] = {}
    cut_sets: dict[int, fq.NadirCutSet] = {}
    qss: dict[int, float] = {}
    extra_tangents = extra_tangents or {}
    cut_cache: dict[float, fq.NadirCutSet] = {}
    for node in tree:
        n = node.id
        up_ids = [int(i) for i in idx_up[n]]
        r_ids = [int(i) for i in idx_r[n]]
        if config.rocof:
            m.add_row(up_ids, inertia_coef.tolist(), ">=", rocof_floor - inertia_const, f"rocof[{n}]")
        if config.nadir:
            if node.demand not in cut_cache:
                k = k_star_for(config, node.demand)
                h_floor, h_max = inertia_range(config, k)
                cut_cache[node.demand] = fq.build_nadir_cuts(k, h_floor, h_max, config.n_cuts)
            cuts = cut_cache[node.demand]
            k = cuts.k_star
            for h_point in extra_tangents.get(n, ()):
                cuts = cuts.with_tangent(h_point)
            k_stars[n], cut_sets[n] = k, cuts
            for j, (a, b) in enumerate(cuts.cuts):
                # R + b * H >= a  with  H = inertia_coef . n_up + inertia_const
                m.add_row(r_ids + up_ids, [1.0] * len(r_ids) + (b * inertia_coef).tolist(), ">=",
                          a - b * inertia_const, f"nadir[{n},{j}]")
        if config.qss:
            qss[n] = fq.qss_response_floor(params, node.demand)
            m.add_row(r_ids, [1.0] * len(r_ids), ">=", qss[n], f"qss[{n}]")

    index = SucIndex(idx_up, idx_sg, idx_p, idx_r, idx_w, idx_s, inertia_coef, inertia_const,
                     k_stars, cut_sets, rocof_floor, qss)
    return m, index


# --------------------------------------------------------------------------
# solved instances


@dataclass
class SucSolution:
    config: SucConfig
    tree: ScenarioTree
    model: MilpModel
    index: SucIndex
    solution: MilpSolution
    refinements: int = 0

    @property
    def status(self) -> str:
        return self.solution.status

    @property
    def objective(self) -> float:
        return self.solution.objective

    def point(self, n: int) -> SchedulePoint:
        x = self.solution.x
        ix = self.index
        integral = not self.config.relax_commitment

        def get(ids):
            vals = x[ids]
            return tuple(float(round(v)) if integral else float(v) for v in vals)

        return SchedulePoint(
            node=n,
            n_up=get(ix.n_up[n]),
            n_start_gen=get(ix.n_sg[n]),
            dispatch=tuple(float(v) for v in x[ix.dispatch[n]]),
            response=tuple(float(v) for v in x[ix.response[n]]),
            wind_used=float(x[ix.wind_used[n]]),
            shed=float(x[ix.shed[n]]),
        )

    def inertia(self, n: int) -> float:
        """Post-fault inertia H(n) including any extra inertia."""
        x = self.solution.x
        return float(self.index.inertia_coef @ x[self.index.n_up[n]] + self.index.inertia_const)

    def response(self, n: int) -> float:
        return float(self.solution.x[self.index.response[n]].sum())

    def stopped(self, n: int, fleet_state: FleetState | None) -> tuple[float, ...]:
        pt = self.point(n)
        parent = self.tree[n].parent
        out = []
        for c in range(len(self.config.system.classes)):
            if parent is not None:
                prev = self.point(parent).n_up[c]
            elif fleet_state is not None:
                prev = fleet_state.classes[c].n_up
            else:
                prev = pt.n_up[c] - pt.n_start_gen[c]
            out.append(max(0.0, prev + pt.n_start_gen[c] - pt.n_up[c]))
        return tuple(out)


@dataclass(frozen=True)
class FrequencyCheck:
    inertia: float
    response: float
    nadir: float
    max_rocof: float
    nadir_ok: bool
    rocof_ok: bool

    @property
    def ok(self) -> bool:
        return self.nadir_ok and self.rocof_ok


def largest_committed_loss(system: PowerSystem, n_up: Sequence[float]) -> tuple[float, float]:
    """(MW, inertia constant) of the largest credible loss given the online units."""
    params = system.params
    largest = system.largest_unit
    if n_up[system.classes.index(largest)] > 0.5:
        return params.p_loss_max, params.h_loss_max
    online = [g for g, n in zip(system.classes, n_up) if n > 0.5]
    if not online:
        return 0.0, 0.0
    g = max(online, key=lambda g: g.p_max)
    return g.p_max, g.inertia_constant


def verify_node(sol: SucSolution, n: int) -> FrequencyCheck:
    """Re-check a solved node against the full frequency simulation."""
    cfg = sol.config
    params = cfg.params
    pt = sol.point(n)
    loss, _ = largest_committed_loss(cfg.system, pt.n_up)
    h = sol.inertia(n)
    r = pt.total_response
    demand = sol.tree[n].demand
    if h <= 0:
        return FrequencyCheck(h, r, -math.inf, math.inf, not cfg.nadir, not cfg.rocof)
    traj = fq.simulate_frequency(h, r, params.t_delivery, params.damping, demand, loss)
    nadir_ok = (not cfg.nadir) or traj.nadir >= -params.delta_f_max - cfg.verify_tol
    rocof_ok = (not cfg.rocof) or traj.max_rocof <= params.rocof_max + 1e-6
    return FrequencyCheck(h, r, traj.nadir, traj.max_rocof, nadir_ok, rocof_ok)


def solve_suc(config: SucConfig, tree: ScenarioTree, fleet_state: FleetState | None = None,
              check_nodes: Sequence[int] = (0,)) -> SucSolution:
    """Build and solve, then verify ``check_nodes`` by simulation, adding a tangent at
    the realised inertia and re-solving while the nadir check fails."""
    backend = get_backend(config.backend, config.gap_tol)
    tangents: dict[int, list[float]] = {}
    refinements = 0
    while True:
        model, index = build_suc(config, tree, fleet_state, tangents)
        solution = backend.solve(model)
        sol = SucSolution(config, tree, model, index, solution, refinements)
        if solution.x is None or not (config.verify and config.nadir):
            return sol
        failed = [n for n in check_nodes if not verify_node(sol, n).nadir_ok]
        if not failed or refinements >= config.max_refinements:
            return sol
        for n in failed:
            tangents.setdefault(n, []).append(max(sol.inertia(n), 1e-6))
        refinements += 1


# --------------------------------------------------------------------------
# rolling planning


@dataclass(frozen=True)
class HourRecord:
    hour: int
    demand: float
    wind_available: float
    point: SchedulePoint
    cost: CostBreakdown
    inertia: float
    response: float
    nadir: float
    max_rocof: float
    refinements: int

    @property
    def curtailed(self) -> float:
        return max(0.0, self.wind_available - self.point.wind_used)


@dataclass
class RunResult:
    system: PowerSystem
    hours: list[HourRecord] = field(default_factory=list)
    aborted: bool = False
    message: str = ""

    @property
    def cost(self) -> CostBreakdown:
        total = CostBreakdown()
        for h in self.hours:
            total = total + h.cost
        return total

    @property
    def total_cost(self) -> float:
        return self.cost.total

    @property
    def curtailed_energy(self) -> float:
        return sum(h.curtailed for h in self.hours)

    def write_csv(self, path) -> None:
        names = self.system.names
        header = ["hour", "demand", "wind_available", "wind_used", "curtailed", "H", "R"]
        header += [f"n_up_{n}" for n in names]
        header += ["cost_startup", "cost_no_load", "cost_marginal", "cost_emissions", "cost_shed", "cost_total",
                   "nadir", "max_rocof"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for h in self.hours:
                c = h.cost
                w.writerow([h.hour, _f(h.demand), _f(h.wind_available), _f(h.point.wind_used), _f(h.curtailed),
                            _f(h.inertia), _f(h.response), *[_f(v) for v in h.point.n_up],
                            _f(c.startup), _f(c.no_load), _f(c.marginal), _f(c.emissions), _f(c.shed), _f(c.total),
                            _f(h.nadir), _f(h.max_rocof)])


def _f(v: float) -> str:
    return f"{v:.6f}"


def advance_state(sol: SucSolution, fleet_state: FleetState | None) -> FleetState:
    """Fleet state for the next hour after committing the root decisions of ``sol``."""
    system = sol.config.system
    root = sol.point(0)
    stopped = sol.stopped(0, fleet_state)
    out = []
    for c, g in enumerate(system.classes):
        keep = max(g.min_up_time, g.min_down_time, 1)
        prev = fleet_state.classes[c] if fleet_state is not None else ClassState(root.n_up[c])
        started = (prev.started + (root.n_start_gen[c],))[-keep:]
        stops = (prev.stopped + (stopped[c],))[-keep:]
        pending = None
        if g.startup_time > 0:
            chain = [0]
            cur = 0
            for _ in range(g.startup_time):
                kids = sol.tree.children(cur)
                if not kids:
                    break
                cur = kids[0]
                chain.append(cur)
            pending = tuple(sol.point(n).n_start_gen[c] for n in chain[1:])
            pending = pending + (0.0,) * (g.startup_time - len(pending))
        out.append(ClassState(root.n_up[c], started, stops, pending))
    return FleetState(tuple(out))


def rolling_run(
    config: SucConfig,
    demand_trace: Sequence[float],
    wind_trace: Sequence[float],
    duration_hours: int,
    *,
    deterministic: bool = False,
    initial_state: FleetState | None = None,
) -> RunResult:
    """Hourly rolling planning: build a tree from realised wind, solve, commit the root, repeat."""
    demand_trace = np.asarray(demand_trace, dtype=float)
    wind_trace = np.asarray(wind_trace, dtype=float)
    need = duration_hours + config.horizon
    if len(demand_trace) < need or len(wind_trace) < need:
        raise ValidationError(f"traces must cover duration + horizon = {need} hours")
    if np.any(wind_trace > config.wind.capacity + 1e-9) or np.any(wind_trace < 0):
        raise ValidationError("wind trace must lie within [0, wind process capacity]")
    result = RunResult(config.system)
    state = initial_state
    for t in range(duration_hours):
        demand = demand_trace[t: t + config.horizon + 1]
        if deterministic:
            tree = build_chain(config.wind, wind_trace[t], demand, config.horizon)
        else:
            tree = build_tree(config.wind, wind_trace[t], demand, config.quantiles, config.horizon)
        sol = solve_suc(config, tree, state)
        if sol.solution.x is None or sol.status != OPTIMAL:
            result.aborted = True
            result.message = f"hour {t}: solver status {sol.status}"
            log.warning("rolling run aborted: %s", result.message)
            return result
        root = sol.point(0)
        root.validate(config.system, tree.root.wind_available, integral=not config.relax_commitment)
        check = verify_node(sol, 0)
        result.hours.append(HourRecord(
            hour=t, demand=float(demand_trace[t]), wind_available=float(wind_trace[t]), point=root,
            cost=node_cost(root, config.system, tree.root.time_step_hours), inertia=check.inertia,
            response=check.response, nadir=check.nadir, max_rocof=check.max_rocof, refinements=sol.refinements,
        ))
        state = advance_state(sol, state)
    return result


__all__ = [
    "SucConfig", "FleetState", "ClassState", "CostBreakdown", "node_cost", "build_suc", "solve_suc",
    "SucSolution", "SucIndex", "verify_node", "rolling_run", "RunResult", "HourRecord", "advance_state",
    "SchedulingError", "GAP_LIMIT",
]

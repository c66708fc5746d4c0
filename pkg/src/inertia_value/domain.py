"""Shared domain types: generator classes, system constants, scenario trees
and per-node schedule decisions."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np


class ValidationError(ValueError):
    """A domain invariant was violated."""


@dataclass(frozen=True)
class GeneratorClass:
    """A class of identical thermal units (one column of the fleet table).

    Powers are per unit in MW, costs per unit. Times are whole hours.
    """

    name: str
    unit_count: int
    p_max: float
    p_min_stable: float
    no_load_cost: float
    marginal_cost: float
    startup_cost: float
    startup_time: int
    min_up_time: int
    min_down_time: int
    inertia_constant: float
    max_response: float
    response_slope: float
    emissions_rate: float
    must_run: bool = False

    def validate(self) -> None:
        def fail(fld: str, why: str) -> None:
            raise ValidationError(f"generator class {self.name!r}: field {fld!r} {why}")

        if self.unit_count < 0 or int(self.unit_count) != self.unit_count:
            fail("unit_count", "must be a non-negative integer")
        if not self.p_max > 0:
            fail("p_max", "must be positive")
        if not 0 < self.p_min_stable <= self.p_max:
            fail("p_min_stable", "must satisfy 0 < p_min_stable <= p_max")
        for fld in ("no_load_cost", "marginal_cost", "startup_cost", "emissions_rate"):
            if getattr(self, fld) < 0:
                fail(fld, "must be non-negative")
        for fld in ("startup_time", "min_up_time", "min_down_time"):
            v = getattr(self, fld)
            if v < 0 or int(v) != v:
                fail(fld, "must be a non-negative whole number of hours")
        if not 0 <= self.response_slope <= 1:
            fail("response_slope", "must lie in [0, 1]")
        if not self.inertia_constant > 0:
            fail("inertia_constant", "must be positive")
        if self.max_response < 0:
            fail("max_response", "must be non-negative")
        if self.max_response > self.p_max:
            fail("max_response", "must not exceed p_max")

    @property
    def inertia_per_unit(self) -> float:
        """Stored energy H_g * P_max of one unit, in MW s."""
        return self.inertia_constant * self.p_max

    def scaled(self, factor: float) -> "GeneratorClass":
        """Scale unit ratings and per-unit costs, keeping counts and per-MWh terms.

        The frequency dynamics are homogeneous in power, so a fleet scaled this
        way behaves self-similarly when demand and loss are scaled alike.
        """
        return replace(
            self,
            p_max=self.p_max * factor,
            p_min_stable=self.p_min_stable * factor,
            no_load_cost=self.no_load_cost * factor,
            startup_cost=self.startup_cost * factor,
            max_response=self.max_response * factor,
        )


@dataclass(frozen=True)
class SystemParams:
    f0: float = 50.0
    damping: float = 0.005
    rocof_max: float = 0.5
    delta_f_max: float = 0.8
    delta_f_qss_max: float = 0.5
    t_delivery: float = 10.0
    p_loss_max: float = 1800.0
    h_loss_max: float = 5.0
    emissions_price: float = 150.0
    voll: float = 30000.0
    wind_capacity: float = 0.0

    def validate(self) -> None:
        positive = ("f0", "rocof_max", "delta_f_max", "delta_f_qss_max", "t_delivery", "p_loss_max")
        for fld in positive:
            if not getattr(self, fld) > 0:
                raise ValidationError(f"system params: field {fld!r} must be positive")
        for fld in ("damping", "h_loss_max", "emissions_price", "voll", "wind_capacity"):
            if getattr(self, fld) < 0:
                raise ValidationError(f"system params: field {fld!r} must be non-negative")

    def scaled(self, factor: float) -> "SystemParams":
        return replace(self, p_loss_max=self.p_loss_max * factor, wind_capacity=self.wind_capacity * factor)


@dataclass(frozen=True)
class PowerSystem:
    """A validated fleet plus its system constants."""

    classes: tuple[GeneratorClass, ...]
    params: SystemParams

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.classes)

    @property
    def largest_unit(self) -> GeneratorClass:
        return max(self.classes, key=lambda g: (g.p_max if g.unit_count > 0 else -1.0))

    @property
    def full_inertia(self) -> float:
        """Post-fault inertia (MW s^2) with every unit online and no extra inertia."""
        counts = [g.unit_count for g in self.classes]
        return committed_inertia(self, counts)

    def class_index(self, name: str) -> int:
        return self.names.index(name)

    def scaled(self, factor: float) -> "PowerSystem":
        return PowerSystem(tuple(g.scaled(factor) for g in self.classes), self.params.scaled(factor))

    def with_params(self, **changes) -> "PowerSystem":
        return validate_fleet(list(self.classes), replace(self.params, **changes))


def committed_inertia(system: PowerSystem, counts: Sequence[float]) -> float:
    """Pre-fault stored energy divided by f0 (MW s^2) for the given online counts."""
    total = sum(g.inertia_per_unit * n for g, n in zip(system.classes, counts))
    return total / system.params.f0


def validate_fleet(classes: Sequence[GeneratorClass], params: SystemParams) -> PowerSystem:
    if not classes:
        raise ValidationError("fleet must contain at least one generator class")
    names = [g.name for g in classes]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate generator class names in {names}")
    for g in classes:
        g.validate()
    params.validate()
    system = PowerSystem(tuple(classes), params)
    largest = system.largest_unit
    if params.p_loss_max < largest.p_max:
        raise ValidationError(
            f"system params: field 'p_loss_max' ({params.p_loss_max} MW) is smaller than the "
            f"largest unit {largest.name!r} ({largest.p_max} MW)"
        )
    return system


def gb_fleet() -> list[GeneratorClass]:
    """The Nuclear / CCGT / OCGT fleet used in the inertia valuation studies.

    Nuclear has no startup data and is treated as must-run.
    """
    return [
        GeneratorClass("nuclear", 6, 1800.0, 1800.0, 0.0, 10.0, 0.0, 0, 0, 0, 5.0, 0.0, 0.0, 0.0, must_run=True),
        GeneratorClass("ccgt", 110, 500.0, 200.0, 7809.0, 51.0, 9000.0, 4, 4, 1, 5.0, 50.0, 0.5, 368.0),
        GeneratorClass("ocgt", 30, 200.0, 50.0, 8000.0, 110.0, 0.0, 0, 0, 0, 5.0, 20.0, 0.5, 833.0),
    ]


def gb_system(params: SystemParams | None = None, scale: float = 1.0) -> PowerSystem:
    system = validate_fleet(gb_fleet(), params or SystemParams())
    return system.scaled(scale) if scale != 1.0 else system


# --------------------------------------------------------------------------
# scenario trees


@dataclass(frozen=True)
class TreeNode:
    id: int
    parent: int | None
    probability: float
    time_step_hours: float
    lead_time: float
    demand: float
    wind_available: float
    branch: int = 0


@dataclass(frozen=True)
class ScenarioTree:
    nodes: tuple[TreeNode, ...]
    _children: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        kids: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            if n.parent is not None:
                kids[n.parent].append(n.id)
        object.__setattr__(self, "_children", {k: tuple(v) for k, v in kids.items()})

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[TreeNode]:
        return iter(self.nodes)

    def __getitem__(self, i: int) -> TreeNode:
        return self.nodes[i]

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def children(self, n: int) -> tuple[int, ...]:
        return self._children[n]

    def leaves(self) -> list[TreeNode]:
        return [n for n in self.nodes if not self._children[n.id]]

    def ancestors(self, n: int) -> list[int]:
        """Node ids from ``n`` (inclusive) up to the root."""
        out = [n]
        while self.nodes[out[-1]].parent is not None:
            out.append(self.nodes[out[-1]].parent)
        return out

    def validate(self, wind_capacity: float | None = None, tol: float = 1e-12) -> None:
        if not self.nodes or self.nodes[0].parent is not None:
            raise ValidationError("scenario tree: node 0 must be the root")
        for i, n in enumerate(self.nodes):
            if n.id != i:
                raise ValidationError(f"scenario tree: node ids must be 0..N-1 in order (got {n.id} at {i})")
            if n.parent is not None and not 0 <= n.parent < i:
                raise ValidationError(f"scenario tree: node {i} has invalid parent {n.parent}")
            if not 0 < n.probability <= 1 + tol:
                raise ValidationError(f"scenario tree: node {i} probability {n.probability} outside (0, 1]")
            if n.demand < 0:
                raise ValidationError(f"scenario tree: node {i} has negative demand")
            if n.wind_available < 0 or (wind_capacity is not None and n.wind_available > wind_capacity + 1e-9):
                raise ValidationError(f"scenario tree: node {i} wind {n.wind_available} outside [0, capacity]")
        if abs(self.nodes[0].probability - 1.0) > tol:
            raise ValidationError("scenario tree: root probability must be 1")
        for n in self.nodes:
            kids = self._children[n.id]
            if kids:
                s = sum(self.nodes[k].probability for k in kids)
                if abs(s - n.probability) > tol:
                    raise ValidationError(
                        f"scenario tree: children of node {n.id} carry probability {s}, parent has {n.probability}"
                    )


def single_node_tree(demand: float, wind: float) -> ScenarioTree:
    return ScenarioTree((TreeNode(0, None, 1.0, 1.0, 0.0, float(demand), float(wind)),))


# --------------------------------------------------------------------------
# schedule decisions


@dataclass(frozen=True)
class SchedulePoint:
    node: int
    n_up: tuple[float, ...]
    n_start_gen: tuple[float, ...]
    dispatch: tuple[float, ...]
    response: tuple[float, ...]
    wind_used: float
    shed: float

    @property
    def total_response(self) -> float:
        return float(sum(self.response))

    def validate(
        self, system: PowerSystem, wind_available: float, *, integral: bool = True, tol: float = 1e-6
    ) -> None:
        for g, n, sg, p, r in zip(system.classes, self.n_up, self.n_start_gen, self.dispatch, self.response):
            where = f"schedule point at node {self.node}, class {g.name!r}"
            if integral and (abs(n - round(n)) > tol or abs(sg - round(sg)) > tol):
                raise ValidationError(f"{where}: unit counts must be integers")
            if not -tol <= n <= g.unit_count + tol:
                raise ValidationError(f"{where}: n_up {n} outside [0, {g.unit_count}]")
            if sg < -tol:
                raise ValidationError(f"{where}: negative n_start_gen")
            if not n * g.p_min_stable - tol <= p <= n * g.p_max + tol:
                raise ValidationError(f"{where}: dispatch {p} outside [{n * g.p_min_stable}, {n * g.p_max}]")
            if r < -tol:
                raise ValidationError(f"{where}: negative response")
        if not -tol <= self.wind_used <= wind_available + tol:
            raise ValidationError(f"schedule point at node {self.node}: wind_used outside [0, {wind_available}]")
        if self.shed < -tol:
            raise ValidationError(f"schedule point at node {self.node}: negative shed")

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {
            "n_up": np.asarray(self.n_up, dtype=float),
            "n_start_gen": np.asarray(self.n_start_gen, dtype=float),
            "dispatch": np.asarray(self.dispatch, dtype=float),
            "response": np.asarray(self.response, dtype=float),
        }

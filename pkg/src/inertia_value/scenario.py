"""Quantile scenario trees over wind, branching only at the current node."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .domain import ScenarioTree, TreeNode, ValidationError


@dataclass(frozen=True)
class WindProcess:
    """AR(1) capacity-factor process; ``sigma_step`` is the hourly innovation std as a capacity fraction."""

    capacity: float
    mean_cf: float = 0.35
    persistence: float = 0.95
    sigma_step: float = 0.04
    seed: int = 0

    def __post_init__(self) -> None:
        if self.capacity < 0:
            raise ValidationError("wind process: field 'capacity' must be non-negative")
        if not 0 <= self.mean_cf <= 1:
            raise ValidationError("wind process: field 'mean_cf' must lie in [0, 1]")
        if not 0 <= self.persistence < 1:
            raise ValidationError("wind process: field 'persistence' must lie in [0, 1)")
        if self.sigma_step < 0:
            raise ValidationError("wind process: field 'sigma_step' must be non-negative")

    @property
    def mean(self) -> float:
        return self.mean_cf * self.capacity

    def with_capacity(self, capacity: float) -> "WindProcess":
        return WindProcess(capacity, self.mean_cf, self.persistence, self.sigma_step, self.seed)

    def capacity_factors(self, hours: int, initial_cf: float | None = None) -> np.ndarray:
        """Seeded realised capacity-factor path, clipped to [0, 1]."""
        rng = np.random.default_rng(self.seed)
        eps = rng.standard_normal(hours)
        cf = np.empty(hours)
        x = self.mean_cf if initial_cf is None else initial_cf
        for t in range(hours):
            cf[t] = x
            x = self.mean_cf + self.persistence * (x - self.mean_cf) + self.sigma_step * eps[t]
            x = min(max(x, 0.0), 1.0)
        return cf

    def sample(self, hours: int, initial_cf: float | None = None) -> np.ndarray:
        return self.capacity * self.capacity_factors(hours, initial_cf)


@dataclass(frozen=True)
class Forecast:
    mean: np.ndarray
    std: np.ndarray
    capacity: float

    def quantile(self, q: float) -> np.ndarray:
        """Per-lead quantile of the predictive normal, truncated to [0, capacity]."""
        return np.clip(self.mean + self.std * ndtri(q), 0.0, self.capacity)


def forecast_distribution(process: WindProcess, current_wind: float, lead) -> Forecast:
    """Predictive mean and std (MW) of wind ``lead`` hours ahead of ``current_wind``."""
    lead = np.atleast_1d(np.asarray(lead))
    if np.any(lead < 1):
        raise ValueError("lead must be at least one hour")
    phi = process.persistence
    mean = process.mean + phi ** lead * (current_wind - process.mean)
    # sum_{j<lead} phi^(2j)
    if phi == 0:
        acc = np.ones(lead.shape)
    else:
        acc = (1.0 - phi ** (2 * lead)) / (1.0 - phi ** 2)
    std = process.sigma_step * process.capacity * np.sqrt(acc)
    return Forecast(mean.astype(float), std.astype(float), process.capacity)


def quantile_probabilities(quantiles: Sequence[float]) -> np.ndarray:
    """Probability mass per quantile from a midpoint partition of [0, 1]."""
    q = np.asarray(quantiles, dtype=float)
    if q.ndim != 1 or q.size == 0:
        raise ValueError("need a non-empty list of quantiles")
    if np.any(q <= 0) or np.any(q >= 1):
        raise ValueError("quantiles must lie strictly inside (0, 1)")
    if np.any(np.diff(q) <= 0):
        raise ValueError("quantiles must be strictly increasing")
    bounds = np.concatenate(([0.0], 0.5 * (q[1:] + q[:-1]), [1.0]))
    return np.diff(bounds)


@dataclass(frozen=True)
class QuantileSpec:
    quantiles: tuple[float, ...] = (0.005, 0.1, 0.3, 0.5, 0.7, 0.9, 0.995)
    probabilities: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "quantiles", tuple(float(q) for q in self.quantiles))
        object.__setattr__(self, "probabilities", tuple(quantile_probabilities(self.quantiles).tolist()))


def _demand_window(demand_profile: Sequence[float], horizon: int) -> np.ndarray:
    d = np.asarray(demand_profile, dtype=float)
    if horizon < 1:
        raise ValueError("horizon must be at least one hour")
    if d.size < horizon:
        raise ValueError(f"demand profile has {d.size} values, horizon needs {horizon}")
    if d.size == horizon:
        # the root plus `horizon` leads need horizon + 1 values: hold the last one
        d = np.append(d, d[-1])
    return d[: horizon + 1]


def build_tree(
    process: WindProcess,
    current_wind: float,
    demand_profile: Sequence[float],
    spec: QuantileSpec,
    horizon: int = 24,
) -> ScenarioTree:
    """Root at the realised wind, then one chain of ``horizon`` hourly nodes per quantile."""
    demand = _demand_window(demand_profile, horizon)
    fc = forecast_distribution(process, current_wind, np.arange(1, horizon + 1))
    nodes = [TreeNode(0, None, 1.0, 1.0, 0.0, float(demand[0]), float(current_wind))]
    for b, (q, p) in enumerate(zip(spec.quantiles, spec.probabilities)):
        wind = fc.quantile(q)
        parent = 0
        for k in range(1, horizon + 1):
            nid = len(nodes)
            nodes.append(TreeNode(nid, parent, p, 1.0, float(k), float(demand[k]), float(wind[k - 1]), b))
            parent = nid
    return ScenarioTree(tuple(nodes))


def build_chain(process: WindProcess, current_wind: float, demand_profile: Sequence[float], horizon: int = 24) -> ScenarioTree:
    """Deterministic single-scenario chain following the clipped mean forecast."""
    demand = _demand_window(demand_profile, horizon)
    fc = forecast_distribution(process, current_wind, np.arange(1, horizon + 1))
    wind = np.clip(fc.mean, 0.0, process.capacity)
    nodes = [TreeNode(0, None, 1.0, 1.0, 0.0, float(demand[0]), float(current_wind))]
    for k in range(1, horizon + 1):
        nodes.append(TreeNode(k, k - 1, 1.0, 1.0, float(k), float(demand[k]), float(wind[k - 1])))
    return ScenarioTree(tuple(nodes))


def daily_demand_profile(hours: int, peak: float, trough: float) -> np.ndarray:
    """Repeating daily demand shape: trough at 04:00, peak at 16:00."""
    t = np.arange(hours) % 24
    return trough + (peak - trough) * 0.5 * (1.0 - np.cos(2.0 * np.pi * (t - 4) / 24.0))

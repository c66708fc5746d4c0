"""Uniform (single lumped mass) frequency model after a generation loss.

Inertia H is expressed in MW s^2 throughout: stored kinetic energy of the
online fleet divided by the nominal frequency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .domain import PowerSystem, SystemParams, ValidationError, committed_inertia

DEFAULT_DT = 0.01
DEFAULT_HORIZON = 60.0


class FrequencyModelError(ValueError):
    pass


@dataclass(frozen=True)
class FrequencyTrajectory:
    time: np.ndarray
    delta_f: np.ndarray
    nadir: float
    max_rocof: float
    qss_deviation: float


def post_fault_inertia(
    system: PowerSystem,
    online_counts: Sequence[float],
    extra_inertia: float = 0.0,
    loss_mw: float | None = None,
    loss_h: float | None = None,
) -> float:
    """System inertia remaining after the loss of ``loss_mw`` MW with inertia constant ``loss_h``."""
    params = system.params
    loss_mw = params.p_loss_max if loss_mw is None else loss_mw
    loss_h = params.h_loss_max if loss_h is None else loss_h
    for g, n in zip(system.classes, online_counts):
        if not -1e-9 <= n <= g.unit_count + 1e-9:
            raise ValidationError(f"online count {n} for {g.name!r} outside [0, {g.unit_count}]")
    committed_mw = sum(g.p_max * n for g, n in zip(system.classes, online_counts))
    if loss_mw > committed_mw + 1e-9 and loss_mw > 0:
        raise FrequencyModelError(f"loss of {loss_mw} MW exceeds committed capacity {committed_mw} MW")
    h = committed_inertia(system, online_counts) - loss_mw * loss_h / params.f0 + extra_inertia
    if h < -1e-9:
        raise FrequencyModelError(f"post-fault inertia is negative ({h} MW s^2)")
    return max(h, 0.0)


def rocof_inertia_floor(p_loss_max: float, rocof_max: float) -> float:
    if not rocof_max > 0:
        raise ValueError("rocof_max must be positive")
    return abs(p_loss_max / (2.0 * rocof_max))


def simulate_frequency(
    h: float,
    r: float,
    t_delivery: float,
    damping: float,
    demand: float,
    p_loss: float,
    dt: float = DEFAULT_DT,
    horizon: float = DEFAULT_HORIZON,
) -> FrequencyTrajectory:
    """Frequency deviation after losing ``p_loss`` MW, with response ``r`` ramped in over ``t_delivery`` s."""
    if not h > 0:
        raise FrequencyModelError("inertia must be positive")
    if not dt > 0:
        raise FrequencyModelError("dt must be positive")
    if horizon < t_delivery:
        raise FrequencyModelError(f"horizon {horizon} s is shorter than the delivery time {t_delivery} s")
    n_steps = int(round(horizon / dt))
    df, rocof = _kernels.swing_trajectory(h, r, t_delivery, damping * demand, p_loss, dt, n_steps)
    if not (np.all(np.isfinite(df)) and np.all(np.isfinite(rocof))):
        raise FrequencyModelError("non-finite frequency state")
    return FrequencyTrajectory(
        time=np.arange(n_steps + 1) * dt,
        delta_f=df,
        nadir=float(df.min()),
        # rate of decline: the open-loop ramp can over-deliver and lift frequency afterwards
        max_rocof=float(max(0.0, -rocof.min())),
        qss_deviation=float(df[-1]),
    )


def simulated_nadir(h, r, params: SystemParams, demand: float, p_loss: float | None = None,
                    dt: float = DEFAULT_DT, horizon: float = DEFAULT_HORIZON) -> np.ndarray:
    """Vectorised nadir-only simulation (stops integrating once frequency recovers)."""
    p_loss = params.p_loss_max if p_loss is None else p_loss
    n_steps = int(round(horizon / dt))
    return _kernels.swing_nadirs(h, r, params.t_delivery, params.damping * demand, p_loss, dt, n_steps)


def qss_response_floor(params: SystemParams, demand: float) -> float:
    """Smallest total response keeping the settled deviation within ``delta_f_qss_max``."""
    if demand < 0:
        raise ValueError("demand must be non-negative")
    return max(0.0, params.p_loss_max - params.damping * demand * params.delta_f_qss_max)


def closed_form_k_star(params: SystemParams) -> float:
    """Undamped ramp response: nadir = -P_L^2 T_d / (4 H R)."""
    return params.p_loss_max ** 2 * params.t_delivery / (4.0 * params.delta_f_max)


def nadir_k_star(
    params: SystemParams,
    demand: float,
    *,
    h_bounds: tuple[float, float] | None = None,
    method: str = "auto",
    n_scan: int = 9,
    rtol: float = 1e-7,
    dt: float = DEFAULT_DT,
    horizon: float = DEFAULT_HORIZON,
) -> float:
    """Smallest k with nadir >= -delta_f_max for every (H, R) on H*R = k with R above the qss floor.

    ``method`` is ``"closed"`` (zero damping only), ``"bisect"`` (simulation)
    or ``"auto"`` (closed form when damping is zero).
    """
    if demand < 0:
        raise ValueError("demand must be non-negative")
    if method not in ("auto", "closed", "bisect"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed" or (method == "auto" and params.damping == 0):
        if params.damping != 0:
            raise FrequencyModelError("closed-form k* only holds without load damping")
        return closed_form_k_star(params)
    if h_bounds is None:
        h_lo = rocof_inertia_floor(params.p_loss_max, params.rocof_max)
        h_bounds = (h_lo, 50.0 * h_lo)
    return _k_star_bisect(params, float(demand), (float(h_bounds[0]), float(h_bounds[1])), n_scan, rtol, dt, horizon)


@lru_cache(maxsize=4096)
def _k_star_bisect(params, demand, h_bounds, n_scan, rtol, dt, horizon) -> float:
    h_lo, h_hi = h_bounds
    if not 0 < h_lo < h_hi:
        raise FrequencyModelError(f"invalid inertia scan range {h_bounds}")
    r_min = qss_response_floor(params, demand)
    target = -params.delta_f_max

    def worst_margin(k: float) -> float:
        # worst nadir along H*R = k restricted to the scan range and R >= r_min
        h_top = min(h_hi, k / r_min) if r_min > 0 else h_hi
        if h_top <= h_lo:
            hs = np.array([h_lo])
            rs = np.array([max(k / h_lo, r_min)])
        else:
            hs = np.geomspace(h_lo, h_top, n_scan)
            rs = k / hs
        return float(simulated_nadir(hs, rs, params, demand, dt=dt, horizon=horizon).min()) - target

    k_hi = closed_form_k_star(params)
    # damping only relieves the deviation, so the undamped value brackets from above
    grow = 0
    while worst_margin(k_hi) < 0:
        k_hi *= 2.0
        grow += 1
        if grow > 30:
            raise FrequencyModelError("no feasible k* within search bounds")
    k_lo = k_hi * 1e-3
    if worst_margin(k_lo) >= 0:
        return k_lo
    return float(brentq(worst_margin, k_lo, k_hi, rtol=rtol, xtol=1e-9 * k_hi))


# --------------------------------------------------------------------------
# outer approximation of H * R >= k*


@dataclass(frozen=True)
class NadirCutSet:
    """Tangent cuts ``R >= a - b * H`` to the curve ``R = k_star / H``."""

    k_star: float
    cuts: tuple[tuple[float, float], ...]
    h_floor: float

    def bound(self, h) -> np.ndarray | float:
        """Smallest response allowed by the cuts at inertia ``h``."""
        h = np.asarray(h, dtype=float)
        a = np.array([c[0] for c in self.cuts])
        b = np.array([c[1] for c in self.cuts])
        out = (a[:, None] - b[:, None] * h.reshape(1, -1)).max(axis=0)
        return float(out[0]) if h.ndim == 0 else out.reshape(h.shape)

    def satisfied(self, h, r, tol: float = 0.0) -> np.ndarray | bool:
        return np.asarray(r) >= np.asarray(self.bound(h)) - tol

    def with_tangent(self, h_point: float) -> "NadirCutSet":
        if not h_point > 0:
            raise ValueError("tangent point must be positive")
        return NadirCutSet(self.k_star, self.cuts + (tangent_cut(self.k_star, h_point),), min(self.h_floor, h_point))


def tangent_cut(k_star: float, h_point: float) -> tuple[float, float]:
    return (2.0 * k_star / h_point, k_star / h_point ** 2)


def build_nadir_cuts(k_star: float, h_floor: float, h_max: float, n_cuts: int) -> NadirCutSet:
    if not 0 < h_floor < h_max:
        raise ValueError(f"need 0 < h_floor < h_max (got {h_floor}, {h_max})")
    if n_cuts < 2:
        raise ValueError("need at least two cuts")
    if not k_star > 0:
        raise ValueError("k_star must be positive")
    points = np.geomspace(h_floor, h_max, n_cuts)
    return NadirCutSet(float(k_star), tuple(tangent_cut(k_star, float(h)) for h in points), float(h_floor))


def max_cut_gap(cut_set: NadirCutSet, h_max: float) -> float:
    """Largest relative shortfall of the cut envelope below k*/H on [h_floor, h_max]."""
    hs = np.geomspace(cut_set.h_floor, h_max, 4001)
    true = cut_set.k_star / hs
    return float(np.max((true - cut_set.bound(hs)) / true))


def steady_state_deviation(params: SystemParams, demand: float, r: float, p_loss: float | None = None) -> float:
    """Settled deviation of the swing equation once response is fully delivered."""
    p_loss = params.p_loss_max if p_loss is None else p_loss
    dpd = params.damping * demand
    if dpd == 0:
        return 0.0 if r >= p_loss else -math.inf
    return (r - p_loss) / dpd

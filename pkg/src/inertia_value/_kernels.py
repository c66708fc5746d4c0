"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``INERTIA_VALUE_NUMBA=0`` in the environment (before import) to force the
numpy implementations. Both paths are exposed so they can be compared
directly (see ``benchmarks/bench_kernels.py``).
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and os.environ.get("INERTIA_VALUE_NUMBA", "1").lower() not in ("0", "false", "no", "off")

SIMPLEX_OPTIMAL = 0
SIMPLEX_UNBOUNDED = 1
SIMPLEX_ITERATION_LIMIT = 2


# --------------------------------------------------------------------------
# swing equation:  2H df/dt + dpd * df = R * min(t/Td, 1) - PL


def _py_swing_trajectory(h, r, t_delivery, dpd, p_loss, dt, n_steps):
    df = np.zeros(n_steps + 1)
    rocof = np.zeros(n_steps + 1)
    inv2h = 1.0 / (2.0 * h)
    ramp = r / t_delivery
    x = 0.0

    def rhs(t, x):
        pfr = ramp * t if t < t_delivery else r
        return (pfr - p_loss - dpd * x) * inv2h

    rocof[0] = rhs(0.0, 0.0)
    for k in range(n_steps):
        t = k * dt
        k1 = rhs(t, x)
        k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2)
        k4 = rhs(t + dt, x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        df[k + 1] = x
        rocof[k + 1] = rhs(t + dt, x)
    return df, rocof


def _py_swing_nadirs(h, r, t_delivery, dpd, p_loss, dt, n_steps):
    h = np.asarray(h, dtype=np.float64)
    r = np.broadcast_to(np.asarray(r, dtype=np.float64), h.shape)
    inv2h = 1.0 / (2.0 * h)
    ramp = r / t_delivery
    x = np.zeros_like(h)
    nadir = np.zeros_like(h)
    active = np.ones(h.shape, dtype=bool)

    def rhs(t, x):
        pfr = ramp * t if t < t_delivery else r
        return (pfr - p_loss - dpd * x) * inv2h

    for k in range(n_steps):
        t = k * dt
        k1 = rhs(t, x)
        k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1)
        k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2)
        k4 = rhs(t + dt, x + dt * k3)
        x = np.where(active, x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), x)
        nadir = np.minimum(nadir, x)
        # once df/dt turns non-negative the trajectory only recovers
        active &= rhs(t + dt, x) < 0.0
        if not active.any():
            break
    return nadir


# --------------------------------------------------------------------------
# dense tableau simplex: rows 0..m-1 constraints, row m reduced costs,
# last column right-hand side. Minimisation.


def _py_simplex_iterate(tab, basis, n_enter, max_iter, tol, bland_after):
    m = tab.shape[0] - 1
    rhs_col = tab.shape[1] - 1
    degenerate_run = 0
    for it in range(max_iter):
        d = tab[m, :n_enter]
        if degenerate_run >= bland_after:
            cand = np.nonzero(d < -tol)[0]
            if cand.size == 0:
                return SIMPLEX_OPTIMAL, it
            e = int(cand[0])
        else:
            e = int(np.argmin(d))
            if d[e] >= -tol:
                return SIMPLEX_OPTIMAL, it
        col = tab[:m, e]
        rows = np.nonzero(col > tol)[0]
        if rows.size == 0:
            return SIMPLEX_UNBOUNDED, it
        ratios = tab[rows, rhs_col] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(tied[np.argmin(basis[tied])])
        degenerate_run = degenerate_run + 1 if tab[r, rhs_col] <= tol else 0
        tab[r, :] /= tab[r, e]
        piv = tab[r, :].copy()
        factors = tab[:, e].copy()
        factors[r] = 0.0
        tab -= np.outer(factors, piv)
        tab[:, e] = 0.0
        tab[r, e] = 1.0
        basis[r] = e
    return SIMPLEX_ITERATION_LIMIT, max_iter


if HAVE_NUMBA:
    _nb_swing_trajectory = numba.njit(cache=True)(_py_swing_trajectory)

    @numba.njit(cache=True)
    def _nb_swing_nadirs(h, r, t_delivery, dpd, p_loss, dt, n_steps):
        out = np.zeros(h.shape[0])
        for i in range(h.shape[0]):
            inv2h = 1.0 / (2.0 * h[i])
            ri = r[i]
            ramp = ri / t_delivery
            x = 0.0
            nadir = 0.0
            for k in range(n_steps):
                t = k * dt
                tm = t + 0.5 * dt
                tn = t + dt
                p0 = ramp * t if t < t_delivery else ri
                pm = ramp * tm if tm < t_delivery else ri
                pn = ramp * tn if tn < t_delivery else ri
                k1 = (p0 - p_loss - dpd * x) * inv2h
                k2 = (pm - p_loss - dpd * (x + 0.5 * dt * k1)) * inv2h
                k3 = (pm - p_loss - dpd * (x + 0.5 * dt * k2)) * inv2h
                k4 = (pn - p_loss - dpd * (x + dt * k3)) * inv2h
                x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                if x < nadir:
                    nadir = x
                if (pn - p_loss - dpd * x) * inv2h >= 0.0:
                    break
            out[i] = nadir
        return out

    @numba.njit(cache=True)
    def _nb_simplex_iterate(tab, basis, n_enter, max_iter, tol, bland_after):
        m = tab.shape[0] - 1
        ncol = tab.shape[1]
        rhs_col = ncol - 1
        degenerate_run = 0
        for it in range(max_iter):
            e = -1
            if degenerate_run >= bland_after:
                for j in range(n_enter):
                    if tab[m, j] < -tol:
                        e = j
                        break
            else:
                best = -tol
                for j in range(n_enter):
                    if tab[m, j] < best:
                        best = tab[m, j]
                        e = j
            if e < 0:
                return SIMPLEX_OPTIMAL, it
            best_ratio = np.inf
            for i in range(m):
                a = tab[i, e]
                if a > tol:
                    ratio = tab[i, rhs_col] / a
                    if ratio < best_ratio:
                        best_ratio = ratio
            if best_ratio == np.inf:
                return SIMPLEX_UNBOUNDED, it
            cutoff = best_ratio + 1e-12 * max(1.0, abs(best_ratio))
            r = -1
            for i in range(m):
                a = tab[i, e]
                if a > tol and tab[i, rhs_col] / a <= cutoff:
                    if r < 0 or basis[i] < basis[r]:
                        r = i
            if tab[r, rhs_col] <= tol:
                degenerate_run += 1
            else:
                degenerate_run = 0
            pv = tab[r, e]
            for j in range(ncol):
                tab[r, j] /= pv
            for i in range(m + 1):
                if i != r:
                    f = tab[i, e]
                    if f != 0.0:
                        for j in range(ncol):
                            tab[i, j] -= f * tab[r, j]
                        tab[i, e] = 0.0
            tab[r, e] = 1.0
            basis[r] = e
        return SIMPLEX_ITERATION_LIMIT, max_iter


def swing_trajectory(h, r, t_delivery, dpd, p_loss, dt, n_steps):
    """Integrate the aggregate swing equation with fixed-step RK4.

    Returns (delta_f, rocof) on the grid ``k * dt``, where rocof is the
    right-hand side evaluated at each grid state.
    """
    args = (float(h), float(r), float(t_delivery), float(dpd), float(p_loss), float(dt), int(n_steps))
    if NUMBA_ENABLED:
        return _nb_swing_trajectory(*args)
    return _py_swing_trajectory(*args)


def swing_nadirs(h, r, t_delivery, dpd, p_loss, dt, n_steps):
    """Grid nadir of the swing equation for each (h, r) pair, stopping once frequency recovers."""
    h = np.ascontiguousarray(np.atleast_1d(h), dtype=np.float64)
    r = np.ascontiguousarray(np.broadcast_to(np.atleast_1d(np.asarray(r, dtype=np.float64)), h.shape))
    args = (float(t_delivery), float(dpd), float(p_loss), float(dt), int(n_steps))
    if NUMBA_ENABLED:
        return _nb_swing_nadirs(h, r, *args)
    return _py_swing_nadirs(h, r, *args)


def simplex_iterate(tab, basis, n_enter, max_iter, tol=1e-9, bland_after=50):
    """Run primal simplex pivots in place on ``tab``; returns (status, iterations)."""
    if NUMBA_ENABLED:
        return _nb_simplex_iterate(tab, basis, int(n_enter), int(max_iter), float(tol), int(bland_after))
    return _py_simplex_iterate(tab, basis, int(n_enter), int(max_iter), float(tol), int(bland_after))

"""Two-phase dense tableau primal simplex.

Entering column: most negative reduced cost, smallest index on ties; after a
run of degenerate pivots it falls back to Bland's rule until progress
resumes. Leaving row: minimum ratio, smallest basic index on ties.
"""
from __future__ import annotations

import math

import numpy as np

from .. import _kernels
from .model import INFEASIBLE, OPTIMAL, UNBOUNDED, MilpModel, MilpSolution

PIVOT_TOL = 1e-9


class SolverError(RuntimeError):
    pass


def _standard_form(model: MilpModel, lb: np.ndarray, ub: np.ndarray):
    """Map x to non-negative y with x = shift + T y; return the pieces needed to build a tableau."""
    n = model.n_vars
    cols: list[tuple[int, float]] = []  # (original var, sign) per y column
    shift = np.zeros(n)
    extra_rows: list[tuple[int, float]] = []  # y_col <= value
    for i in range(n):
        lo, hi = lb[i], ub[i]
        if math.isfinite(lo):
            shift[i] = lo
            cols.append((i, 1.0))
            if math.isfinite(hi):
                extra_rows.append((len(cols) - 1, hi - lo))
        elif math.isfinite(hi):
            shift[i] = hi
            cols.append((i, -1.0))
        else:
            cols.append((i, 1.0))
            cols.append((i, -1.0))
    ny = len(cols)
    # dense constraint rows in y-space
    a_rows, senses, rhs = [], [], []
    col_of_var: dict[int, list[tuple[int, float]]] = {}
    for j, (i, s) in enumerate(cols):
        col_of_var.setdefault(i, []).append((j, s))
    for row in model.rows:
        a = np.zeros(ny)
        b = row.rhs - float(row.coef @ shift[row.index]) if row.index.size else row.rhs
        for i, c in zip(row.index, row.coef):
            for j, s in col_of_var[int(i)]:
                a[j] += c * s
        a_rows.append(a)
        senses.append(row.sense)
        rhs.append(b)
    for j, v in extra_rows:
        a = np.zeros(ny)
        a[j] = 1.0
        a_rows.append(a)
        senses.append("<=")
        rhs.append(v)
    c = model.cost_vector()
    cy = np.array([c[i] * s for i, s in cols])
    const = float(c @ shift) + model.objective_constant
    return cols, shift, np.array(a_rows).reshape(len(a_rows), ny), senses, np.array(rhs, dtype=float), cy, const


def solve_lp(model: MilpModel, lb=None, ub=None, max_iter: int | None = None) -> MilpSolution:
    """Solve the continuous relaxation of ``model`` (integrality ignored)."""
    model.validate()
    lb = np.asarray(model.lb if lb is None else lb, dtype=float)
    ub = np.asarray(model.ub if ub is None else ub, dtype=float)
    if np.any(lb > ub + 1e-12):
        return MilpSolution(INFEASIBLE, math.inf, None)
    ub = np.maximum(ub, lb)
    cols, shift, a, senses, b, cy, const = _standard_form(model, lb, ub)
    m, ny = a.shape

    # slack / surplus columns, then flip rows to make rhs non-negative
    n_slack = sum(1 for s in senses if s != "==")
    body = np.zeros((m, ny + n_slack))
    body[:, :ny] = a
    slack_col = [-1] * m
    k = ny
    for r, s in enumerate(senses):
        if s != "==":
            body[r, k] = 1.0 if s == "<=" else -1.0
            slack_col[r] = k
            k += 1
    slack_basic = [-1] * m
    for r in range(m):
        if b[r] < 0:
            body[r] *= -1.0
            b[r] = -b[r]
        # a slack usable as the starting basic column has coefficient +1
        if slack_col[r] >= 0 and body[r, slack_col[r]] == 1.0:
            slack_basic[r] = slack_col[r]
    art_rows = [r for r in range(m) if slack_basic[r] < 0]
    n_real = ny + n_slack
    n_art = len(art_rows)
    ncol = n_real + n_art
    tab = np.zeros((m + 1, ncol + 1))
    tab[:m, :n_real] = body
    tab[:m, -1] = b
    basis = np.zeros(m, dtype=np.int64)
    for r in range(m):
        basis[r] = slack_basic[r]
    for k, r in enumerate(art_rows):
        tab[r, n_real + k] = 1.0
        basis[r] = n_real + k
    limit = max_iter if max_iter is not None else 50 * (m + ncol) + 1000
    iterations = 0

    if n_art:
        # phase 1: minimise the sum of artificials
        tab[m, :] = 0.0
        for r in art_rows:
            tab[m, :n_real] -= tab[r, :n_real]
            tab[m, -1] -= tab[r, -1]
        status, it = _kernels.simplex_iterate(tab, basis, ncol, limit, PIVOT_TOL)
        iterations += it
        if status == _kernels.SIMPLEX_ITERATION_LIMIT:
            raise SolverError("simplex iteration limit reached in phase 1")
        infeas = -tab[m, -1]
        if infeas > 1e-7 * max(1.0, float(np.abs(b).max(initial=0.0))):
            return MilpSolution(INFEASIBLE, math.inf, None, iterations=iterations)
        # drive remaining artificials out of the basis, dropping redundant rows
        keep = np.ones(m + 1, dtype=bool)
        for r in range(m):
            if basis[r] >= n_real:
                nz = np.nonzero(np.abs(tab[r, :n_real]) > PIVOT_TOL)[0]
                if nz.size == 0:
                    keep[r] = False
                    continue
                e = int(nz[0])
                tab[r, :] /= tab[r, e]
                f = tab[:, e].copy()
                f[r] = 0.0
                tab -= np.outer(f, tab[r, :])
                tab[:, e] = 0.0
                tab[r, e] = 1.0
                basis[r] = e
        tab = np.ascontiguousarray(np.delete(tab[keep], np.s_[n_real:ncol], axis=1))
        basis = np.ascontiguousarray(basis[keep[:m]])
        m = tab.shape[0] - 1

    # phase 2
    cost = np.zeros(n_real)
    cost[:ny] = cy
    tab[m, :] = 0.0
    tab[m, :n_real] = cost
    for r in range(m):
        cb = cost[basis[r]]
        if cb != 0.0:
            tab[m, :] -= cb * tab[r, :]
    status, it = _kernels.simplex_iterate(tab, basis, n_real, limit, PIVOT_TOL)
    iterations += it
    if status == _kernels.SIMPLEX_ITERATION_LIMIT:
        raise SolverError("simplex iteration limit reached in phase 2")
    if status == _kernels.SIMPLEX_UNBOUNDED:
        return MilpSolution(UNBOUNDED, -math.inf, None, iterations=iterations)

    y = np.zeros(n_real)
    for r in range(m):
        y[basis[r]] = tab[r, -1]
    x = shift.copy()
    for j, (i, s) in enumerate(cols):
        x[i] += s * y[j]
    x = np.clip(x, lb, ub)
    return MilpSolution(OPTIMAL, model.evaluate(x), x, iterations=iterations)

"""Best-first branch and bound over the built-in simplex."""
from __future__ import annotations

import heapq
import itertools
import math

import numpy as np

from .model import GAP_LIMIT, INFEASIBLE, OPTIMAL, UNBOUNDED, MilpModel, MilpSolution
from .simplex import solve_lp

INT_TOL = 1e-6


def _most_fractional(x: np.ndarray, int_idx: np.ndarray) -> int:
    if int_idx.size == 0:
        return -1
    frac = x[int_idx] - np.floor(x[int_idx])
    dist = np.minimum(frac, 1.0 - frac)
    k = int(np.argmax(dist))  # first index wins ties
    return -1 if dist[k] <= INT_TOL else int(int_idx[k])


def relative_gap(incumbent: float, bound: float) -> float:
    if not math.isfinite(incumbent):
        return math.inf
    return max(0.0, incumbent - bound) / max(1.0, abs(incumbent))


def solve_milp(model: MilpModel, gap_tol: float = 1e-6, node_limit: int = 100_000) -> MilpSolution:
    model.validate()
    int_idx = np.array([i for i in range(model.n_vars) if model.integer[i]], dtype=np.int64)
    lb0 = np.asarray(model.lb, dtype=float)
    ub0 = np.asarray(model.ub, dtype=float)
    # integer bounds can be tightened to integers up front
    lb0[int_idx] = np.ceil(lb0[int_idx] - INT_TOL)
    ub0[int_idx] = np.floor(ub0[int_idx] + INT_TOL)

    root = solve_lp(model, lb0, ub0)
    if root.status in (INFEASIBLE, UNBOUNDED):
        return root
    iterations = root.iterations
    tie = itertools.count()
    heap = [(root.objective, next(tie), lb0, ub0, root)]
    best_x: np.ndarray | None = None
    best_obj = math.inf
    nodes = 0

    while heap:
        bound, _, lb, ub, sol = heapq.heappop(heap)
        if relative_gap(best_obj, bound) <= gap_tol:
            # best-first: every open node is at least as bad as this one
            heap.clear()
            break
        j = _most_fractional(sol.x, int_idx)
        if j < 0:
            if sol.objective < best_obj:
                best_obj, best_x = sol.objective, sol.x
            continue
        if nodes >= node_limit:
            heapq.heappush(heap, (bound, next(tie), lb, ub, sol))
            x = None if best_x is None else _rounded(best_x, int_idx)
            lowest = min(item[0] for item in heap)
            return MilpSolution(GAP_LIMIT, best_obj, x, relative_gap(best_obj, lowest), nodes, iterations)
        nodes += 1
        v = sol.x[j]
        for child_lb, child_ub in ((lb, _with(ub, j, math.floor(v))), (_with(lb, j, math.ceil(v)), ub)):
            child = solve_lp(model, child_lb, child_ub)
            iterations += child.iterations
            if child.status != OPTIMAL or child.objective >= best_obj:
                continue
            if _most_fractional(child.x, int_idx) < 0:
                best_obj, best_x = child.objective, child.x
            else:
                heapq.heappush(heap, (child.objective, next(tie), child_lb, child_ub, child))

    if best_x is None:
        return MilpSolution(INFEASIBLE, math.inf, None, nodes=nodes, iterations=iterations)
    x = _rounded(best_x, int_idx)
    lowest = min((item[0] for item in heap), default=best_obj)
    return MilpSolution(OPTIMAL, model.evaluate(x), x, relative_gap(best_obj, min(lowest, best_obj)), nodes, iterations)


def _with(arr: np.ndarray, j: int, value: float) -> np.ndarray:
    out = arr.copy()
    out[j] = value
    return out


def _rounded(x: np.ndarray, int_idx: np.ndarray) -> np.ndarray:
    x = x.copy()
    x[int_idx] = np.round(x[int_idx])
    return x

"""Solver backends behind a common ``solve(model) -> MilpSolution`` call.

``builtin`` is the in-house simplex + branch and bound; ``highs`` hands the
same model to HiGHS through scipy for the larger rolling studies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .bnb import solve_milp
from .model import GAP_LIMIT, INFEASIBLE, OPTIMAL, UNBOUNDED, MilpModel, MilpSolution
from .simplex import solve_lp


class Backend(Protocol):
    name: str

    def solve(self, model: MilpModel) -> MilpSolution: ...


@dataclass(frozen=True)
class BuiltinBackend:
    gap_tol: float = 1e-6
    node_limit: int = 100_000
    name: str = "builtin"

    def solve(self, model: MilpModel) -> MilpSolution:
        if model.n_integer == 0:
            return solve_lp(model)
        return solve_milp(model, self.gap_tol, self.node_limit)


@dataclass(frozen=True)
class HighsBackend:
    gap_tol: float = 1e-6
    time_limit: float | None = None
    node_limit: int | None = None
    name: str = "highs"

    def solve(self, model: MilpModel) -> MilpSolution:
        model.validate()
        c = model.cost_vector()
        lb = np.asarray(model.lb, dtype=float)
        ub = np.asarray(model.ub, dtype=float)
        integrality = np.asarray(model.integer, dtype=np.uint8)
        cons = []
        if model.n_rows:
            lo, hi = model.row_bounds()
            cons.append(LinearConstraint(model.matrix(), lo, hi))
        options = {"mip_rel_gap": self.gap_tol, "presolve": True}
        if self.time_limit is not None:
            options["time_limit"] = self.time_limit
        if self.node_limit is not None:
            options["node_limit"] = self.node_limit
        res = milp(c, integrality=integrality, bounds=Bounds(lb, ub), constraints=cons, options=options)
        if res.status == 2:
            return MilpSolution(INFEASIBLE, math.inf, None)
        if res.status == 3:
            return MilpSolution(UNBOUNDED, -math.inf, None)
        if res.x is None:
            if res.status == 1:
                return MilpSolution(GAP_LIMIT, math.inf, None, math.inf)
            # "infeasible or unbounded": classify on the relaxation
            relaxed = self._polish(model.relaxed(), np.zeros(model.n_vars), c, lb, ub, classify=True)
            return MilpSolution(relaxed, math.inf if relaxed == INFEASIBLE else -math.inf, None)
        x = np.asarray(res.x, dtype=float)
        gap = float(getattr(res, "mip_gap", 0.0) or 0.0)
        if model.n_integer:
            x = self._polish(model, x, c, lb, ub)
        status = OPTIMAL if res.status == 0 else GAP_LIMIT
        return MilpSolution(status, model.evaluate(x), x, gap, int(getattr(res, "mip_node_count", 0) or 0))

    @staticmethod
    def _polish(model: MilpModel, x, c, lb, ub, classify: bool = False):
        """Round the integers and re-solve the continuous part so rows hold to LP tolerance."""
        ints = np.asarray(model.integer, dtype=bool)
        xi = np.round(x[ints])
        lb2, ub2 = lb.copy(), ub.copy()
        lb2[ints] = xi
        ub2[ints] = xi
        lo, hi = model.row_bounds()
        a = model.matrix()
        eq = lo == hi
        le = np.isfinite(hi) & ~eq
        ge = np.isfinite(lo) & ~eq
        a_ub = None
        b_ub = None
        if le.any() or ge.any():
            a_ub = sparse.vstack([a[le], -a[ge]]).tocsr()
            b_ub = np.concatenate([hi[le], -lo[ge]])
        res = linprog(
            c, A_ub=a_ub, b_ub=b_ub, A_eq=a[eq] if eq.any() else None, b_eq=lo[eq] if eq.any() else None,
            bounds=np.column_stack([lb2, ub2]), method="highs",
        )
        if classify:
            return UNBOUNDED if res.status == 3 else INFEASIBLE
        if res.status != 0:
            x = x.copy()
            x[ints] = xi
            return x
        out = np.asarray(res.x, dtype=float)
        out[ints] = xi
        return out


def get_backend(name: str, gap_tol: float = 1e-6, **kwargs) -> Backend:
    if name == "builtin":
        return BuiltinBackend(gap_tol=gap_tol, **kwargs)
    if name == "highs":
        return HighsBackend(gap_tol=gap_tol, **kwargs)
    raise ValueError(f"unknown solver backend {name!r} (expected 'builtin' or 'highs')")

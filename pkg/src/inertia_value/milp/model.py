"""Solver-independent MILP representation (minimisation)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

SENSES = ("<=", "==", ">=")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
GAP_LIMIT = "gap_limit"


class ModelError(ValueError):
    """The model is malformed."""


@dataclass(frozen=True)
class Row:
    index: np.ndarray
    coef: np.ndarray
    sense: str
    rhs: float
    name: str = ""


@dataclass
class MilpSolution:
    status: str
    objective: float
    x: np.ndarray | None
    gap: float = 0.0
    nodes: int = 0
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL

    def __getitem__(self, i: int) -> float:
        if self.x is None:
            raise KeyError("solution carries no point")
        return float(self.x[i])


def _terms(terms: Mapping[int, float] | Iterable[tuple[int, float]]) -> dict[int, float]:
    items = terms.items() if isinstance(terms, Mapping) else terms
    out: dict[int, float] = {}
    for i, c in items:
        out[int(i)] = out.get(int(i), 0.0) + float(c)
    return out


@dataclass
class MilpModel:
    name: str = "model"
    var_names: list[str] = field(default_factory=list)
    lb: list[float] = field(default_factory=list)
    ub: list[float] = field(default_factory=list)
    integer: list[bool] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    objective_constant: float = 0.0

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_integer(self) -> int:
        return sum(self.integer)

    def add_var(self, name: str, lb: float = 0.0, ub: float = math.inf, integer: bool = False) -> int:
        self.var_names.append(name)
        self.lb.append(float(lb))
        self.ub.append(float(ub))
        self.integer.append(bool(integer))
        return len(self.var_names) - 1

    def add_constraint(self, terms, sense: str, rhs: float, name: str = "") -> int:
        if sense not in SENSES:
            raise ModelError(f"unknown relation {sense!r}")
        t = _terms(terms)
        idx = np.fromiter(t.keys(), dtype=np.int64, count=len(t))
        coef = np.fromiter(t.values(), dtype=np.float64, count=len(t))
        order = np.argsort(idx)
        self.rows.append(Row(idx[order], coef[order], sense, float(rhs), name))
        return len(self.rows) - 1

    def add_row(self, index: list[int], coef: list[float], sense: str, rhs: float, name: str = "") -> int:
        """Fast path for rows whose variable indices are already unique."""
        if sense not in SENSES:
            raise ModelError(f"unknown relation {sense!r}")
        self.rows.append(Row(np.asarray(index, dtype=np.int64), np.asarray(coef, dtype=np.float64), sense, float(rhs), name))
        return len(self.rows) - 1

    def add_objective(self, terms, constant: float = 0.0) -> None:
        for i, c in _terms(terms).items():
            self.objective[i] = self.objective.get(i, 0.0) + c
        self.objective_constant += constant

    def set_bounds(self, i: int, lb: float | None = None, ub: float | None = None) -> None:
        if lb is not None:
            self.lb[i] = float(lb)
        if ub is not None:
            self.ub[i] = float(ub)

    def fix(self, i: int, value: float) -> None:
        self.set_bounds(i, value, value)

    def validate(self) -> None:
        n = self.n_vars
        lb = np.asarray(self.lb, dtype=float)
        ub = np.asarray(self.ub, dtype=float)
        ints = np.asarray(self.integer, dtype=bool)
        bad = np.isnan(lb) | np.isnan(ub)
        if bad.any():
            raise ModelError(f"variable {self.var_names[int(np.argmax(bad))]!r} has NaN bounds")
        bad = ints & ~(np.isfinite(lb) & np.isfinite(ub))
        if bad.any():
            raise ModelError(f"integer variable {self.var_names[int(np.argmax(bad))]!r} needs finite bounds")
        if self.rows:
            sizes = np.fromiter((r.index.size for r in self.rows), dtype=np.int64, count=len(self.rows))
            idx = np.concatenate([r.index for r in self.rows])
            coef = np.concatenate([r.coef for r in self.rows])
            rhs = np.fromiter((r.rhs for r in self.rows), dtype=float, count=len(self.rows))
            owner = np.repeat(np.arange(len(self.rows)), sizes)
            bad = (idx < 0) | (idx >= n)
            if bad.any():
                k = int(owner[np.argmax(bad)])
                raise ModelError(f"constraint {self.rows[k].name or k} references an unknown variable")
            bad_row = ~np.isfinite(rhs)
            bad_row[owner[~np.isfinite(coef)]] = True
            if bad_row.any():
                k = int(np.argmax(bad_row))
                raise ModelError(f"constraint {self.rows[k].name or k} has non-finite data")
        for i, c in self.objective.items():
            if not 0 <= i < n:
                raise ModelError("objective references an unknown variable")
            if not math.isfinite(c):
                raise ModelError(f"objective coefficient of {self.var_names[i]!r} is not finite")

    # -- array views ---------------------------------------------------------

    def cost_vector(self) -> np.ndarray:
        c = np.zeros(self.n_vars)
        for i, v in self.objective.items():
            c[i] = v
        return c

    def matrix(self) -> sparse.csr_matrix:
        indptr = np.zeros(self.n_rows + 1, dtype=np.int64)
        for k, row in enumerate(self.rows):
            indptr[k + 1] = indptr[k] + row.index.size
        indices = np.concatenate([r.index for r in self.rows]) if self.rows else np.zeros(0, dtype=np.int64)
        data = np.concatenate([r.coef for r in self.rows]) if self.rows else np.zeros(0)
        return sparse.csr_matrix((data, indices, indptr), shape=(self.n_rows, self.n_vars))

    def row_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.full(self.n_rows, -np.inf)
        hi = np.full(self.n_rows, np.inf)
        for k, row in enumerate(self.rows):
            if row.sense in ("==", ">="):
                lo[k] = row.rhs
            if row.sense in ("==", "<="):
                hi[k] = row.rhs
        return lo, hi

    def evaluate(self, x: np.ndarray) -> float:
        return float(self.cost_vector() @ x + self.objective_constant)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest absolute violation of any row or bound at ``x``."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.n_rows:
            ax = self.matrix() @ x
            lo, hi = self.row_bounds()
            worst = max(worst, float(np.max(np.maximum(lo - ax, ax - hi))))
        worst = max(worst, float(np.max(np.maximum(np.asarray(self.lb) - x, x - np.asarray(self.ub)), initial=0.0)))
        return max(worst, 0.0)

    def relaxed(self) -> "MilpModel":
        return MilpModel(
            self.name, list(self.var_names), list(self.lb), list(self.ub), [False] * self.n_vars,
            list(self.rows), dict(self.objective), self.objective_constant,
        )

    def copy(self) -> "MilpModel":
        return MilpModel(
            self.name, list(self.var_names), list(self.lb), list(self.ub), list(self.integer),
            list(self.rows), dict(self.objective), self.objective_constant,
        )

    def scaled_objective(self, factor: float) -> "MilpModel":
        m = self.copy()
        m.objective = {i: c * factor for i, c in self.objective.items()}
        m.objective_constant = self.objective_constant * factor
        return m

    # -- LP file format --------------------------------------------------------

    def to_lp(self) -> str:
        """CPLEX LP text. Variables are renamed x0, x1, ...; original names go in comments."""
        def term_str(idx, coef) -> str:
            parts = []
            for i, c in zip(idx, coef):
                if c == 0:
                    continue
                sign = "-" if c < 0 else "+"
                parts.append(f"{sign} {abs(c):.17g} x{i}")
            if not parts:
                return "0 x0"
            s = " ".join(parts)
            return s[2:] if s.startswith("+ ") else s

        out = [f"\\ {self.name}", "\\ variables: " + ", ".join(f"x{i}={n}" for i, n in enumerate(self.var_names))]
        out.append("Minimize")
        obj_idx = sorted(self.objective)
        obj = term_str(obj_idx, [self.objective[i] for i in obj_idx])
        if self.objective_constant:
            obj += f" + {self.objective_constant:.17g} constobj" if self.objective_constant > 0 else \
                f" - {-self.objective_constant:.17g} constobj"
        out.append(f" obj: {obj}")
        out.append("Subject To")
        for k, row in enumerate(self.rows):
            sense = {"<=": "<=", ">=": ">=", "==": "="}[row.sense]
            out.append(f" c{k}: {term_str(row.index, row.coef)} {sense} {row.rhs:.17g}")
        out.append("Bounds")
        for i in range(self.n_vars):
            lo, hi = self.lb[i], self.ub[i]
            los = "-inf" if lo == -math.inf else f"{lo:.17g}"
            his = "+inf" if hi == math.inf else f"{hi:.17g}"
            out.append(f" {los} <= x{i} <= {his}")
        if self.objective_constant:
            out.append(" constobj = 1")
        ints = [f"x{i}" for i in range(self.n_vars) if self.integer[i]]
        if ints:
            out.append("General")
            for k in range(0, len(ints), 10):
                out.append(" " + " ".join(ints[k:k + 10]))
        out.append("End")
        return "\n".join(out) + "\n"

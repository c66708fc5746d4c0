"""Independent reference solvers used by the tests."""
import itertools

import numpy as np
from scipy.optimize import linprog

from inertia_value.domain import GeneratorClass, ScenarioTree, SystemParams, TreeNode, validate_fleet
from inertia_value.scenario import QuantileSpec, WindProcess
from inertia_value.scheduler import SucConfig


def vertex_lp(c, a_ub, b_ub, lb, ub):
    """min c.x s.t. a_ub x <= b_ub, lb <= x <= ub by enumerating every basic solution."""
    n = len(c)
    rows = [(a_ub[i], b_ub[i]) for i in range(len(b_ub))]
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        rows.append((e, ub[j]))
        rows.append((-e, -lb[j]))
    a_all = np.array([r[0] for r in rows])
    b_all = np.array([r[1] for r in rows])
    best = np.inf
    for idx in itertools.combinations(range(len(rows)), n):
        a = a_all[list(idx)]
        if abs(np.linalg.det(a)) < 1e-10:
            continue
        x = np.linalg.solve(a, b_all[list(idx)])
        if np.all(a_all @ x <= b_all + 1e-9):
            best = min(best, float(c @ x))
    return best


def brute_force_milp(model):
    """Enumerate every integer assignment; dispatch the rest with scipy's LP."""
    ints = np.array([i for i in range(model.n_vars) if model.integer[i]])
    lb = np.asarray(model.lb, float)
    ub = np.asarray(model.ub, float)
    ranges = [np.arange(int(np.ceil(lb[i])), int(np.floor(ub[i])) + 1) for i in ints]
    grid = np.array(np.meshgrid(*ranges, indexing="ij")).reshape(len(ints), -1).T.astype(float)
    a = model.matrix().toarray()
    lo, hi = model.row_bounds()
    # discard assignments that break rows made of integer variables only
    int_only = np.all(a[:, np.setdiff1d(np.arange(model.n_vars), ints)] == 0, axis=1)
    if int_only.any():
        act = grid @ a[int_only][:, ints].T
        ok = np.all((act >= lo[int_only] - 1e-9) & (act <= hi[int_only] + 1e-9), axis=1)
        grid = grid[ok]
    c = model.cost_vector()
    eq = lo == hi
    le = np.isfinite(hi) & ~eq
    ge = np.isfinite(lo) & ~eq
    a_ub = np.vstack([a[le], -a[ge]])
    b_ub = np.concatenate([hi[le], -lo[ge]])
    best = np.inf
    for assign in grid:
        l2, u2 = lb.copy(), ub.copy()
        l2[ints] = assign
        u2[ints] = assign
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a[eq] if eq.any() else None,
                      b_eq=lo[eq] if eq.any() else None, bounds=np.column_stack([l2, u2]), method="highs")
        if res.status == 0:
            best = min(best, res.fun + model.objective_constant)
    return best


def tiny_uc(rng, n_nodes=None):
    """Random 2-class x 2-unit system on a 1-3 node tree, built-in solver, all frequency rows on."""
    classes = []
    for name in ("a", "b"):
        pmax = rng.uniform(20, 60)
        classes.append(GeneratorClass(
            name, 2, pmax, rng.uniform(0.1, 0.4) * pmax, rng.uniform(0, 500), rng.uniform(10, 80),
            rng.uniform(0, 300), int(rng.integers(0, 2)), int(rng.integers(0, 3)), int(rng.integers(0, 2)),
            rng.uniform(20, 60), rng.uniform(0.3, 0.9) * pmax, rng.uniform(0.2, 0.8), rng.uniform(0, 800),
        ))
    params = SystemParams(rocof_max=rng.uniform(0.4, 1.0), p_loss_max=max(g.p_max for g in classes), h_loss_max=5.0,
                          voll=1000.0, delta_f_max=rng.uniform(0.8, 2.0), wind_capacity=60.0)
    system = validate_fleet(classes, params)
    n_nodes = int(rng.integers(1, 4)) if n_nodes is None else n_nodes
    d = rng.uniform(60, 200, 3)
    w = rng.uniform(0, 60, 3)
    if n_nodes == 3 and rng.random() < 0.5:
        p = rng.uniform(0.2, 0.8)
        nodes = (TreeNode(0, None, 1.0, 1.0, 0.0, d[0], w[0]), TreeNode(1, 0, p, 1.0, 1.0, d[1], w[1], 0),
                 TreeNode(2, 0, 1 - p, 1.0, 1.0, d[2], w[2], 1))
    else:
        nodes = tuple(TreeNode(k, k - 1 if k else None, 1.0, 1.0, float(k), d[k], w[k]) for k in range(n_nodes))
    config = SucConfig(system, QuantileSpec((0.5,)), WindProcess(60.0), n_cuts=4, backend="builtin",
                       verify=False)
    return config, ScenarioTree(nodes)

import os
import subprocess
import sys

import numpy as np
import pytest

from inertia_value import _kernels as kn

pytestmark = pytest.mark.skipif(not kn.HAVE_NUMBA, reason="numba not installed")


def test_swing_trajectory_paths_agree():
    a = kn._py_swing_trajectory(300.0, 170.0, 10.0, 15.0, 180.0, 0.01, 3000)
    b = kn._nb_swing_trajectory(300.0, 170.0, 10.0, 15.0, 180.0, 0.01, 3000)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-12, atol=1e-14)


def test_swing_nadirs_paths_agree(rng):
    h = rng.uniform(100, 2000, 50)
    r = rng.uniform(50, 400, 50)
    a = kn._py_swing_nadirs(h, r, 10.0, 15.0, 180.0, 0.01, 6000)
    b = kn._nb_swing_nadirs(h, r, 10.0, 15.0, 180.0, 0.01, 6000)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


def test_simplex_paths_agree(rng):
    # min c.x, A x + s = b, x, s >= 0 with b > 0: slack basis is feasible
    m, n = 8, 12
    a = rng.uniform(0, 1, (m, n))
    b = rng.uniform(1, 2, m)
    c = rng.uniform(-1, 0.2, n)
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :n] = c
    basis = np.arange(n, n + m)
    t1, b1 = tab.copy(), basis.copy()
    t2, b2 = tab.copy(), basis.copy()
    s1 = kn._py_simplex_iterate(t1, b1, n + m, 500, 1e-9, 50)
    s2 = kn._nb_simplex_iterate(t2, b2, n + m, 500, 1e-9, 50)
    assert s1 == s2 and s1[0] == kn.SIMPLEX_OPTIMAL
    assert np.array_equal(b1, b2)
    np.testing.assert_allclose(t1, t2, rtol=1e-12, atol=1e-12)


def test_env_flag_selects_numpy_path():
    code = "from inertia_value import _kernels as k; print(k.NUMBA_ENABLED)"
    env = dict(os.environ, INERTIA_VALUE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_numpy_path_gives_same_k_star():
    code = ("from inertia_value.frequency import nadir_k_star; from inertia_value.domain import SystemParams;"
            "print(repr(nadir_k_star(SystemParams(), 30000.0)))")
    vals = []
    for flag in ("0", "1"):
        env = dict(os.environ, INERTIA_VALUE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        vals.append(float(out.stdout))
    assert vals[0] == pytest.approx(vals[1], rel=1e-12)

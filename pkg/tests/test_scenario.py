import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from inertia_value.domain import ValidationError
from inertia_value.scenario import (
    QuantileSpec, WindProcess, build_chain, build_tree, daily_demand_profile, forecast_distribution,
    quantile_probabilities,
)

PAPER_QUANTILES = (0.005, 0.1, 0.3, 0.5, 0.7, 0.9, 0.995)


def test_midpoint_probabilities():
    p = quantile_probabilities(PAPER_QUANTILES)
    assert np.allclose(p, [0.0525, 0.1475, 0.2, 0.2, 0.2, 0.1475, 0.0525], atol=1e-15)


def test_single_quantile():
    assert quantile_probabilities([0.5]).tolist() == [1.0]


@pytest.mark.parametrize("bad", [[0.5, 0.3], [0.0, 0.5], [0.5, 1.0], [], [0.2, 0.2]])
def test_bad_quantiles(bad):
    with pytest.raises(ValueError):
        quantile_probabilities(bad)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(1e-4, 1 - 1e-4), min_size=1, max_size=12, unique=True))
def test_probabilities_sum_to_one(qs):
    qs = sorted(qs)
    if np.any(np.diff(qs) <= 0):
        return
    p = quantile_probabilities(qs)
    assert np.all(p > 0)
    assert abs(p.sum() - 1.0) <= 1e-12


def test_memoryless_forecast():
    wp = WindProcess(1000.0, mean_cf=0.3, persistence=0.0)
    fc = forecast_distribution(wp, 900.0, 1)
    assert fc.mean[0] == pytest.approx(300.0)


def test_forecast_lead_must_be_positive():
    with pytest.raises(ValueError):
        forecast_distribution(WindProcess(100.0), 10.0, 0)


def test_stationary_std_and_monte_carlo():
    wp = WindProcess(1.0, mean_cf=0.5, persistence=0.8, sigma_step=0.02, seed=3)
    fc = forecast_distribution(wp, 0.5, 400)
    stationary = 0.02 / np.sqrt(1 - 0.8 ** 2)
    assert fc.std[0] == pytest.approx(stationary, rel=1e-9)
    # Monte Carlo of the untruncated recursion at lead 5
    rng = np.random.default_rng(11)
    x = np.full(200_000, 0.7)
    for _ in range(5):
        x = 0.5 + 0.8 * (x - 0.5) + 0.02 * rng.standard_normal(x.size)
    fc5 = forecast_distribution(wp, 0.7, 5)
    assert x.mean() == pytest.approx(fc5.mean[0], abs=3e-4)
    assert x.std() == pytest.approx(fc5.std[0], rel=1e-2)


def test_zero_sigma_collapses_quantiles():
    wp = WindProcess(1000.0, sigma_step=0.0)
    tree = build_tree(wp, 400.0, np.full(25, 3000.0), QuantileSpec(PAPER_QUANTILES), 24)
    for k in range(1, 25):
        winds = {round(n.wind_available, 9) for n in tree if n.lead_time == k}
        assert len(winds) == 1


def test_tree_shape_and_probabilities():
    wp = WindProcess(3000.0, seed=1)
    spec = QuantileSpec(PAPER_QUANTILES)
    tree = build_tree(wp, 1200.0, np.full(24, 3000.0), spec, 24)
    assert len(tree) == 1 + 7 * 24
    tree.validate(wind_capacity=3000.0)
    assert sum(n.probability for n in tree.leaves()) == pytest.approx(1.0, abs=1e-12)
    kids = tree.children(0)
    assert [tree[c].probability for c in kids] == list(spec.probabilities)
    assert tree.root.wind_available == 1200.0
    assert all(n.time_step_hours == 1.0 for n in tree)


def test_branch_node_numbering():
    tree = build_tree(WindProcess(100.0), 10.0, np.ones(4), QuantileSpec((0.2, 0.8)), 3)
    assert [n.parent for n in tree] == [None, 0, 1, 2, 0, 4, 5]
    assert [n.branch for n in tree][4:] == [1, 1, 1]


def test_single_quantile_chain():
    tree = build_tree(WindProcess(3000.0), 1000.0, np.full(24, 3000.0), QuantileSpec((0.5,)), 24)
    assert len(tree) == 25
    assert all(n.probability == 1.0 for n in tree)
    chain = build_chain(WindProcess(3000.0), 1000.0, np.full(24, 3000.0), 24)
    assert [n.wind_available for n in tree] == pytest.approx([n.wind_available for n in chain])


def test_quantile_monotone_across_branches():
    wp = WindProcess(3000.0, sigma_step=0.08)
    tree = build_tree(wp, 2900.0, np.full(24, 3000.0), QuantileSpec(PAPER_QUANTILES), 24)
    for k in range(1, 25):
        winds = [n.wind_available for n in tree if n.lead_time == k]
        assert np.all(np.diff(winds) >= 0)
        assert min(winds) >= 0 and max(winds) <= 3000.0


def test_tree_needs_demand_for_horizon():
    with pytest.raises(ValueError):
        build_tree(WindProcess(100.0), 10.0, np.ones(10), QuantileSpec(), 24)


def test_sample_is_seeded_and_clipped():
    wp = WindProcess(500.0, sigma_step=0.3, seed=9)
    a, b = wp.sample(500), wp.sample(500)
    assert np.array_equal(a, b)
    assert a.min() >= 0 and a.max() <= 500.0


def test_wind_process_validation():
    with pytest.raises(ValidationError):
        WindProcess(100.0, persistence=1.0)
    with pytest.raises(ValidationError):
        WindProcess(-1.0)


def test_daily_profile_shape():
    d = daily_demand_profile(48, 4500.0, 2500.0)
    assert d[4] == pytest.approx(2500.0) and d[16] == pytest.approx(4500.0)
    assert np.allclose(d[:24], d[24:])

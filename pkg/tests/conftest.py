import numpy as np
import pytest

from inertia_value.domain import SystemParams, gb_system


@pytest.fixture
def gb():
    return gb_system()


@pytest.fixture
def gb10():
    """GB-style fleet at one tenth of its ratings."""
    return gb_system(scale=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def params():
    return SystemParams()

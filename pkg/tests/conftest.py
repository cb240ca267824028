import numpy as np
import pytest

from tsallisq import PureState, RoofConfig, ghz, w_state


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def quick_roof():
    # small restart budget keeps unit tests fast; accuracy-sensitive tests
    # pass their own config
    return RoofConfig(restarts=6, seed=5)


@pytest.fixture
def bell():
    return PureState((2, 2), np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))


@pytest.fixture
def w3():
    return w_state(3)


@pytest.fixture
def ghz3():
    return ghz(3)

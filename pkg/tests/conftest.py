import numpy as np
import pytest

from network.analysis import AnalyticEngine, OracleEngine, TruncationPolicy
from network.params import SystemParams


@pytest.fixture(scope="session")
def small_params():
    """A dense 20 m disk: the physics of the default profile at a fraction of the cost."""
    return SystemParams.default(d_ph=3.0, lambda_w=0.05, r_d=20.0)


@pytest.fixture(scope="session")
def policy():
    return TruncationPolicy()


@pytest.fixture(scope="session")
def engine(small_params, policy):
    return AnalyticEngine(small_params, policy)


@pytest.fixture(scope="session")
def oracle(small_params, policy):
    return OracleEngine(small_params, policy)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def serving_loss(small_params):
    """Path loss of an unobstructed head 5 m away."""
    return small_params.kappa * 5.0 ** small_params.beta

import numpy as np
import pytest

from qubitkraus.model import ModelParams, damping_rates

BETAS = (0.0, 50.0, 100.0)
ACCEPTANCE_TIMES = np.logspace(-5, -1, 20)


@pytest.fixture
def params():
    return ModelParams()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=BETAS, ids=lambda b: f"beta{b:g}")
def beta_params(request):
    return ModelParams(beta=request.param)


@pytest.fixture
def beta_rates(beta_params):
    return damping_rates(beta_params)


def random_hermitian(rng, dim=4):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (z + z.conj().T) / 2

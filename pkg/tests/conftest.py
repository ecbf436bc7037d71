import numpy as np
import pytest

from locmom import SampledSeries, builtin_process, euler_maruyama


@pytest.fixture(scope="session")
def ou_series():
    return euler_maruyama(builtin_process("ou", seed=11))[0]


@pytest.fixture(scope="session")
def piecewise_series():
    return euler_maruyama(builtin_process("piecewise", seed=2))[0]


@pytest.fixture(scope="session")
def coupled2d_series():
    return euler_maruyama(builtin_process("coupled2d", seed=3))


@pytest.fixture(scope="session")
def nonstationary2d_series():
    return euler_maruyama(builtin_process("nonstationary2d", seed=3))


def relaxation_series(n=200, dt=0.1, x0=1.0):
    """Noiseless relaxation x_{i+1} = x_i * (1 - dt); increments are -dt*x_i."""
    vals = x0 * (1.0 - dt) ** np.arange(n)
    return SampledSeries(values=vals, dt=dt)

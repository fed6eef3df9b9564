import pytest

from coneweyl import kernels
from coneweyl.params import Params


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # trigger JIT compilation once so timed checks measure the computation
    kernels.warmup()


@pytest.fixture(scope="session")
def params():
    return Params()


@pytest.fixture(scope="session")
def small_params():
    return Params(lmax=16)

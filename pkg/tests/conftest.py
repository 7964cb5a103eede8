import pytest

from bergkern import ConstantWeight, KernelSeries, StepWeight


@pytest.fixture(scope="session")
def step18():
    return StepWeight.from_plateau(18.0, 0.25)


@pytest.fixture(scope="session")
def const1():
    return ConstantWeight(1.0)


@pytest.fixture(scope="session")
def step18_series(step18):
    return KernelSeries(step18)


@pytest.fixture(scope="session")
def const1_series(const1):
    return KernelSeries(const1)

import pytest

from pvmaster.analytic import CombinationParams, catalog_function
from pvmaster.kernels import FamilyOrder


@pytest.fixture
def z():
    return catalog_function("power", {"m": 1})


@pytest.fixture
def ez():
    return catalog_function("exp")


def comb(alpha=0.0, beta=1.0, theta=1.0):
    return CombinationParams(alpha, beta, theta)


def order(n, m=None):
    return FamilyOrder(n, m)

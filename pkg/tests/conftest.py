import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gencore import fixtures
from gencore.numfield import Mat

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def ex4_6():
    return fixtures.get("ex4_6")


@pytest.fixture
def ex4_6_sq():
    return fixtures.get("ex4_6_sq")


@pytest.fixture
def ex3_4():
    return fixtures.get("ex3_4")


@pytest.fixture
def ex4_5():
    return fixtures.get("ex4_5")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def exact(rows):
    return Mat(rows, exact=True)


def fifteenths(rows):
    from fractions import Fraction

    return Mat([[Fraction(x, 15) for x in r] for r in rows], exact=True)

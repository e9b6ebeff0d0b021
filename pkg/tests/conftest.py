"""Shared fixtures: canonical weights and seeded instance generators."""

import numpy as np
import pytest

from llab.intervals import Interval, normalize
from llab.weights import WeightModel


@pytest.fixture
def w_unit():
    return WeightModel.constant()


@pytest.fixture
def u_unit():
    return WeightModel.constant(domain_kind="line")


@pytest.fixture
def u_abs():
    return WeightModel.power(1.0, domain_kind="line")


def random_pair(rng, max_components=6):
    """A seeded (I, S) pair: an interval I and a union S of disjoint
    subintervals of I with positive total measure strictly below |I|."""
    lo = float(rng.uniform(-10.0, 10.0))
    length = float(rng.uniform(0.5, 20.0))
    I = Interval(lo, lo + length)
    m = int(rng.integers(1, max_components + 1))
    cuts = np.sort(rng.uniform(lo, lo + length, size=2 * m))
    parts = [(float(cuts[2 * k]), float(cuts[2 * k + 1])) for k in range(m)]
    S = normalize([p for p in parts if p[1] - p[0] > 1e-6 * length])
    if not S or S.measure >= 0.999 * length:
        return random_pair(rng, max_components)
    return I, S

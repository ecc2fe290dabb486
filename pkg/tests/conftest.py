import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from dyadlab.dyadic_model import DyadicModel  # noqa: E402
from dyadlab.exponents import ExponentSequence, Geometric  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SMALL_MODELS = [(1, 0), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (1, 5), (3, 1)]


@st.composite
def models(draw, max_leaves=64):
    n = draw(st.integers(1, 3))
    K = draw(st.integers(0, 6))
    while (1 << (n * K)) > max_leaves:
        K -= 1
    return DyadicModel(n, K)


exponent_values = st.sampled_from([Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4), Fraction(6)])


@st.composite
def sequences(draw, max_head=3, allow_tail=True):
    head = tuple(draw(st.lists(exponent_values, min_size=1, max_size=max_head)))
    tail = Geometric(2, 1) if allow_tail and draw(st.booleans()) else None
    return ExponentSequence(head, tail)


def positive_array(draw, size, lo=-2.0, hi=2.0):
    logs = draw(st.lists(st.floats(lo, hi), min_size=size, max_size=size))
    return np.exp(np.array(logs))


def nonneg_array(draw, size):
    vals = draw(st.lists(st.one_of(st.just(0.0), st.floats(0.01, 10.0)), min_size=size, max_size=size))
    return np.array(vals)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))

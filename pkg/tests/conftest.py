import random
from fractions import Fraction

import pytest

from toda_blowup import CartanData, GammaVector, enumerate_group

SUITE_TYPES = ["A1", "A2", "A3", "B2", "C3", "G2"]


def random_gammas(rank, count=3, seed=0):
    """Rational gammas in [-1/2, 3/2] with denominator 8; fixed seed."""
    rng = random.Random(seed + 97 * rank)
    return [tuple(Fraction(rng.randint(-4, 12), 8) for _ in range(rank)) for _ in range(count)]


def suite_gammas(rank):
    return [tuple(Fraction(0) for _ in range(rank))] + random_gammas(rank)


def suite_cases():
    """(type, gamma) pairs of the cross-type suite."""
    return [(t, g) for t in SUITE_TYPES for g in suite_gammas(CartanData.of(t).rank)]


_groups = {}


def group_of(t):
    if t not in _groups:
        _groups[t] = enumerate_group(CartanData.of(t))
    return _groups[t]


@pytest.fixture
def a2():
    return CartanData.of("A2")

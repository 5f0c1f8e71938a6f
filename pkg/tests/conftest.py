"""
Shared fixtures: import paths, working fields and seeded generators.
"""
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))
sys.path.insert(0, str(Path(__file__).parent.parent))

from algebra import FieldSpec, PointOfP1  # noqa: E402


@pytest.fixture
def f2():
    return FieldSpec(2)


@pytest.fixture
def f3():
    return FieldSpec(3)


@pytest.fixture
def f5():
    return FieldSpec(5)


@pytest.fixture
def f4():
    """F_4 = F_2[t]/(t^2 + t + 1)."""
    return FieldSpec(2, 2, (1, 1, 1))


@pytest.fixture
def rng():
    return random.Random(20240501)


@pytest.fixture
def origin():
    def at(spec):
        return PointOfP1.finite(spec.zero())
    return at


@pytest.fixture
def infinity():
    return PointOfP1.infinity()

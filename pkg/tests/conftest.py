"""Shared fixtures: default tolerances and small hand-checkable matrices."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from models.config import DEFAULT_TOLERANCES, GenConfig  # noqa: E402
from services.instancegen import random_commuting_family  # noqa: E402


@pytest.fixture
def cfg():
    return DEFAULT_TOLERANCES


@pytest.fixture
def pair_4x4():
    """A 4x4 PD pair with AJB = BJA but A²JB² ≠ B²JA²."""
    A = np.array([
        [3.0, 0.0, 0.0, 3.0],
        [0.0, 8.0, 5.0, 0.0],
        [0.0, 5.0, 5.0, 0.0],
        [3.0, 0.0, 0.0, 8.0],
    ])
    B = np.array([
        [7.0, 0.0, 0.0, 7.0],
        [0.0, 9.0, 2.0, 0.0],
        [0.0, 2.0, 2.0, 0.0],
        [7.0, 0.0, 0.0, 9.0],
    ])
    return A, B


@pytest.fixture
def a_2x2():
    return np.array([[2.0, 1.0], [1.0, 1.0]])


@pytest.fixture
def rank_one_forms():
    """Q = x₁² and R = x₁² + y₁²."""
    return np.diag([1.0, 0.0]), np.eye(2)


@pytest.fixture
def planted_pair():
    """Planted PD pair with spectra [1, 2] and [3, 5] sharing one congruence."""
    return random_commuting_family(GenConfig(seed=7, n=2), [[1.0, 2.0], [3.0, 5.0]])

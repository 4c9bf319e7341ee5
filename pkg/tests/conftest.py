from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from exact_fa.config import AlgebraSettings, FitSettings
from exact_fa.faml.problem import FactorProblem

FIXTURES = Path(__file__).parent / "fixtures"

EXAMPLE1_S = (
    (Fraction(1), Fraction(1, 2), Fraction(1, 3)),
    (Fraction(1, 2), Fraction(1), Fraction(2, 3)),
    (Fraction(1, 3), Fraction(2, 3), Fraction(1)),
)


@pytest.fixture
def example1_S():
    return EXAMPLE1_S


@pytest.fixture
def example1_array():
    return np.array([[float(value) for value in row] for row in EXAMPLE1_S])


@pytest.fixture
def example1_problem():
    return FactorProblem(EXAMPLE1_S, 1)


@pytest.fixture
def example4_bases():
    with (FIXTURES / "example4_bases.json").open("r", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture
def algebra_settings():
    return AlgebraSettings()


@pytest.fixture
def fit_settings():
    return FitSettings(starts=20)


def _random_spd(rng: np.random.Generator, p: int) -> np.ndarray:
    A = rng.normal(size=(p, p))
    matrix = A @ A.T + p * np.eye(p)
    scale = np.sqrt(np.diag(matrix))
    return matrix / np.outer(scale, scale)


@pytest.fixture
def random_spd():
    """Factory for well-conditioned correlation-like SPD matrices."""

    return _random_spd

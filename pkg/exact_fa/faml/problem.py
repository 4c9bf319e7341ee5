"""Factor-analysis problems with an exact rational covariance matrix."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from ..algebra.polyring import PolynomialRing
from ..config import DEFAULT_SAMPLE_SIZE
from ..errors import DomainError, SingularCovariance
from ..utils.poly_text import parse_rational

LOGGER = logging.getLogger(__name__)

RationalMatrix = Tuple[Tuple[Fraction, ...], ...]


def _to_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)  # type: ignore[arg-type]


def as_rational_matrix(rows: Sequence[Sequence[object]]) -> RationalMatrix:
    matrix = tuple(tuple(_to_fraction(entry) for entry in row) for row in rows)
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise DomainError("covariance matrix must be square and non-empty")
    return matrix


def identity(size: int) -> RationalMatrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size))


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""

    work = [list(row) for row in matrix]
    size = len(work)
    result = Fraction(1)
    for column in range(size):
        pivot = next((row for row in range(column, size) if work[row][column]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != column:
            work[column], work[pivot] = work[pivot], work[column]
            result = -result
        result *= work[column][column]
        for row in range(column + 1, size):
            factor = work[row][column] / work[column][column]
            if factor:
                for index in range(column, size):
                    work[row][index] -= factor * work[column][index]
    return result


def leading_principal_minors(matrix: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    return [determinant([row[:size] for row in matrix[:size]]) for size in range(1, len(matrix) + 1)]


def rational_matrix_inverse(matrix: Sequence[Sequence[object]]) -> RationalMatrix:
    """Exact inverse by Gauss-Jordan elimination."""

    source = as_rational_matrix(matrix)
    size = len(source)
    work = [list(row) + list(unit) for row, unit in zip(source, identity(size))]
    for column in range(size):
        pivot = next((row for row in range(column, size) if work[row][column]), None)
        if pivot is None:
            raise SingularCovariance()
        work[column], work[pivot] = work[pivot], work[column]
        scale = work[column][column]
        work[column] = [value / scale for value in work[column]]
        for row in range(size):
            if row != column and work[row][column]:
                factor = work[row][column]
                work[row] = [value - factor * pivot_value for value, pivot_value in zip(work[row], work[column])]
    return tuple(tuple(row[size:]) for row in work)


def loading_layout(p: int, k: int) -> List[Tuple[int, int]]:
    """Free loading entries ``(i, j)`` (0-based, ``j <= i``), row-major."""

    return [(i, j) for i in range(p) for j in range(min(i + 1, k))]


def loading_names(p: int, k: int) -> Tuple[str, ...]:
    wide = p >= 10 or k >= 10
    return tuple(f"l{i + 1}_{j + 1}" if wide else f"l{i + 1}{j + 1}" for i, j in loading_layout(p, k))


def psi_names(p: int) -> Tuple[str, ...]:
    return tuple(f"psi{i + 1}" for i in range(p))


@dataclass(frozen=True)
class FactorProblem:
    """Sample covariance ``S``, number of factors ``k`` and an optional ridge term."""

    S: RationalMatrix
    k: int
    ridge: Fraction = Fraction(0)
    sample_size: int = DEFAULT_SAMPLE_SIZE
    layout: Tuple[Tuple[int, int], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        matrix = as_rational_matrix(self.S)
        object.__setattr__(self, "S", matrix)
        object.__setattr__(self, "ridge", _to_fraction(self.ridge))
        p = len(matrix)
        if p < 2:
            raise DomainError("at least two observed variables are required")
        if not 1 <= self.k < p:
            raise DomainError(f"number of factors must satisfy 1 <= k < p, got k={self.k}, p={p}")
        if self.ridge < 0:
            raise DomainError("ridge must be non-negative")
        if any(matrix[i][j] != matrix[j][i] for i in range(p) for j in range(i)):
            raise DomainError("covariance matrix must be symmetric")
        minors = leading_principal_minors(self.covariance)
        if minors[-1] == 0:
            raise SingularCovariance()
        if any(minor <= 0 for minor in minors):
            raise DomainError("covariance matrix must be positive definite")
        object.__setattr__(self, "layout", tuple(loading_layout(p, self.k)))

    @property
    def p(self) -> int:
        return len(self.S)

    @property
    def covariance(self) -> RationalMatrix:
        """``S + ridge * I``, the matrix every computation uses."""

        if not self.ridge:
            return self.S
        return tuple(
            tuple(value + (self.ridge if i == j else 0) for j, value in enumerate(row)) for i, row in enumerate(self.S)
        )

    @property
    def nloadings(self) -> int:
        return len(self.layout)

    def loading_names(self) -> Tuple[str, ...]:
        return loading_names(self.p, self.k)

    def ring(self) -> PolynomialRing:
        return PolynomialRing(self.loading_names())

    def joint_ring(self) -> PolynomialRing:
        return PolynomialRing(psi_names(self.p) + self.loading_names())

    def inverse(self) -> RationalMatrix:
        return rational_matrix_inverse(self.covariance)

    def determinant(self) -> Fraction:
        return determinant(self.covariance)

    def as_array(self) -> np.ndarray:
        return np.array([[float(value) for value in row] for row in self.covariance], dtype=float)

    def loadings_from_vector(self, values: Sequence[object]) -> List[List[object]]:
        """Arrange free loading values into a ``p x k`` matrix with upper-triangle zeros."""

        if len(values) != self.nloadings:
            raise DomainError(f"expected {self.nloadings} loading values, got {len(values)}")
        zero = values[0] * 0 if values else 0  # type: ignore[operator]
        matrix: List[List[object]] = [[zero] * self.k for _ in range(self.p)]
        for (i, j), value in zip(self.layout, values):
            matrix[i][j] = value
        return matrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], k: int, ridge: object = 0, sample_size: int = DEFAULT_SAMPLE_SIZE) -> "FactorProblem":
        return cls(as_rational_matrix(rows), k, _to_fraction(ridge), sample_size)


__all__ = [
    "FactorProblem",
    "RationalMatrix",
    "as_rational_matrix",
    "determinant",
    "identity",
    "leading_principal_minors",
    "loading_layout",
    "loading_names",
    "psi_names",
    "rational_matrix_inverse",
]

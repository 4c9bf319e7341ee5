"""Polynomial systems of the likelihood equations."""

from __future__ import annotations

import logging
from itertools import combinations
from typing import List, Sequence, Tuple

from ..algebra.groebner import Ideal
from ..algebra.polyring import Polynomial, PolynomialRing
from .problem import FactorProblem

LOGGER = logging.getLogger(__name__)

PolyMatrix = List[List[Polynomial]]


def _loading_matrix(prob: FactorProblem, nvars: int, offset: int = 0) -> PolyMatrix:
    matrix = [[Polynomial.zero(nvars) for _ in range(prob.k)] for _ in range(prob.p)]
    for position, (i, j) in enumerate(prob.layout):
        matrix[i][j] = Polynomial.variable(nvars, offset + position)
    return matrix


def _mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    inner = len(b)
    nvars = a[0][0].nvars
    result = []
    for row in a:
        out_row = []
        for column in range(len(b[0])):
            total = Polynomial.zero(nvars)
            for index in range(inner):
                if row[index] and b[index][column]:
                    total = total + row[index] * b[index][column]
            out_row.append(total)
        result.append(out_row)
    return result


def _transpose(a: PolyMatrix) -> PolyMatrix:
    return [list(column) for column in zip(*a)]


def _constant_matrix(values: Sequence[Sequence[object]], nvars: int) -> PolyMatrix:
    return [[Polynomial.constant(nvars, value) for value in row] for row in values]


def psi_polynomials(prob: FactorProblem, nvars: int = 0, offset: int = 0) -> List[Polynomial]:
    """``psi_i = s_ii - sum_j l_ij^2`` as polynomials in the loadings."""

    nvars = nvars or prob.nloadings
    loadings = _loading_matrix(prob, nvars, offset)
    cov = prob.covariance
    result = []
    for i in range(prob.p):
        poly = Polynomial.constant(nvars, cov[i][i])
        for j in range(prob.k):
            if loadings[i][j]:
                poly = poly - loadings[i][j] * loadings[i][j]
        result.append(poly)
    return result


def build_likelihood_ideal(prob: FactorProblem) -> Ideal:
    """Entries of ``{S - LL' - diag(S - LL')} S^-1 L`` over the free loadings."""

    nvars = prob.nloadings
    loadings = _loading_matrix(prob, nvars)
    cov = _constant_matrix(prob.covariance, nvars)
    inverse = _constant_matrix(prob.inverse(), nvars)
    llt = _mul(loadings, _transpose(loadings))
    residual = [
        [cov[i][j] - llt[i][j] if i != j else Polynomial.zero(nvars) for j in range(prob.p)] for i in range(prob.p)
    ]
    product = _mul(_mul(residual, inverse), loadings)
    generators = tuple(product[i][j] for i, j in prob.layout)
    LOGGER.debug("Likelihood ideal: %d generators in %d loadings", len(generators), nvars)
    return Ideal(nvars, generators)


def build_joint_ideal(prob: FactorProblem) -> Tuple[Ideal, PolynomialRing]:
    """The system in both the unique variances and the loadings.

    Generators are ``psi_i - (s_ii - sum_j l_ij^2)`` followed by the entries of
    ``L - (LL' + Psi) S^-1 L``; the ring lists ``psi1..psip`` before the loadings.
    """

    ring = prob.joint_ring()
    nvars = ring.nvars
    p = prob.p
    loadings = _loading_matrix(prob, nvars, offset=p)
    inverse = _constant_matrix(prob.inverse(), nvars)
    psi = [Polynomial.variable(nvars, i) for i in range(p)]
    generators: List[Polynomial] = []
    for i, poly in enumerate(psi_polynomials(prob, nvars, offset=p)):
        generators.append(psi[i] - poly)
    sigma = _mul(loadings, _transpose(loadings))
    for i in range(p):
        sigma[i][i] = sigma[i][i] + psi[i]
    product = _mul(_mul(sigma, inverse), loadings)
    for i, j in prob.layout:
        generators.append(loadings[i][j] - product[i][j])
    return Ideal(nvars, tuple(generators)), ring


def extra_splitters(prob: FactorProblem, nvars: int = 0, offset: int = 0) -> List[Tuple[str, Polynomial]]:
    """Further splitting polynomials for ``k >= 2``: ``l11``, the second-column loadings
    ``l_i2`` (``i >= 2``) and the ``k x k`` minors of ``L`` over rows ``2..p``."""

    if prob.k < 2:
        return []
    nvars = nvars or prob.nloadings
    loadings = _loading_matrix(prob, nvars, offset)
    names = prob.loading_names()
    position = {cell: index for index, cell in enumerate(prob.layout)}
    result: List[Tuple[str, Polynomial]] = [(names[position[(0, 0)]], loadings[0][0])]
    for i in range(1, prob.p):
        result.append((names[position[(i, 1)]], loadings[i][1]))
    for rows in combinations(range(1, prob.p), prob.k):
        minor = _determinant([[loadings[i][j] for j in range(prob.k)] for i in rows], nvars)
        if minor:
            label = "det(" + ",".join(str(i + 1) for i in rows) + ")"
            result.append((label, minor))
    return result


def _determinant(matrix: PolyMatrix, nvars: int) -> Polynomial:
    if len(matrix) == 1:
        return matrix[0][0]
    total = Polynomial.zero(nvars)
    for column, entry in enumerate(matrix[0]):
        if not entry:
            continue
        minor = [row[:column] + row[column + 1 :] for row in matrix[1:]]
        term = entry * _determinant(minor, nvars)
        total = total + term if column % 2 == 0 else total - term
    return total


__all__ = [
    "build_joint_ideal",
    "build_likelihood_ideal",
    "extra_splitters",
    "psi_polynomials",
]

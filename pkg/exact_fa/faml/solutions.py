"""Assembling candidate solutions from the decomposition leaves."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.groebner import branch_budget
from ..algebra.intervals import Interval
from ..algebra.realsolve import RealPoint, slice_positive_dimensional, solve_triangular
from ..config import AlgebraSettings, as_fraction
from ..errors import DomainError, EmptySample, ExactFAError
from ..pool import WorkerPool
from ..utils.rationals import to_decimal_string
from .decompose import DecompositionNode, decompose
from .ideal import build_likelihood_ideal
from .problem import FactorProblem, loading_layout

LOGGER = logging.getLogger(__name__)

DUPLICATE_REFINEMENT_WIDTH = Fraction(1, 2**80)


def recover_psi(loadings: Sequence[Sequence[Any]], S: Sequence[Sequence[Any]]) -> Tuple[Any, ...]:
    """``psi_i = s_ii - sum_j l_ij^2``; negative values are kept."""

    if len(loadings) != len(S):
        raise DomainError(f"loadings have {len(loadings)} rows but S is {len(S)}x{len(S)}")
    result = []
    for i, row in enumerate(loadings):
        value = S[i][i]
        for entry in row:
            value = value - entry**2
        result.append(value)
    return tuple(result)


def canonicalize_sign(loadings: Any) -> Any:
    """Flip columns so that the first entry of largest magnitude is non-negative."""

    if isinstance(loadings, np.ndarray):
        result = np.array(loadings, dtype=float, copy=True)
        for column in range(result.shape[1]):
            values = result[:, column]
            if not values.any():
                continue
            pivot = int(np.argmax(np.abs(values)))
            if values[pivot] < 0:
                result[:, column] = -values
        return result
    rows = [list(row) for row in loadings]
    if not rows:
        return tuple()
    for column in range(len(rows[0])):
        values = [row[column] for row in rows]
        magnitudes = [abs(value) for value in values]
        largest = max(magnitudes)
        if not largest:
            continue
        pivot = magnitudes.index(largest)
        if values[pivot] < 0:
            for row in rows:
                row[column] = -row[column]
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class CandidateSolution:
    """A real stationary point ``(L, Psi)`` found on leaf ``leaf``."""

    loadings: Tuple[Tuple[float, ...], ...]
    psi: Tuple[float, ...]
    leaf: str
    sample_only: bool = False
    exact: bool = False
    exact_loadings: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    exact_psi: Optional[Tuple[Fraction, ...]] = None
    residual: float = 0.0
    point: Optional[RealPoint] = field(default=None, compare=False, repr=False)

    @property
    def L(self) -> np.ndarray:
        return np.array(self.loadings, dtype=float)

    @property
    def Psi(self) -> np.ndarray:
        return np.array(self.psi, dtype=float)

    @property
    def canonical_loadings(self) -> Tuple[Tuple[Any, ...], ...]:
        if self.exact_loadings is not None:
            return canonicalize_sign(self.exact_loadings)
        return canonicalize_sign(self.loadings)

    def sign_key(self, digits: int = 9) -> tuple:
        canonical = self.canonical_loadings
        if self.exact_loadings is not None:
            return ("exact", canonical)
        return ("float", tuple(tuple(round(float(value), digits) for value in row) for row in canonical))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "L": [list(row) for row in self.loadings],
            "psi": list(self.psi),
            "leaf": self.leaf,
            "sample_only": self.sample_only,
            "exact": self.exact,
            "residual": self.residual,
        }
        if self.exact_loadings is not None and self.exact_psi is not None:
            data["L_exact"] = [[str(value) for value in row] for row in self.exact_loadings]
            data["psi_exact"] = [str(value) for value in self.exact_psi]
        return data


@dataclass
class SolutionSet:
    """Every candidate of a problem together with the leaves that produced them."""

    problem: FactorProblem
    solutions: List[CandidateSolution] = field(default_factory=list)
    leaves: List[DecompositionNode] = field(default_factory=list)
    errors: Dict[str, str] = field(default_factory=dict)

    def __iter__(self) -> Iterator[CandidateSolution]:
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __getitem__(self, index: int) -> CandidateSolution:
        return self.solutions[index]

    @property
    def complete(self) -> bool:
        return not self.errors and all(leaf.status in ("ZeroDim", "Empty") for leaf in self.leaves)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "solutions": [solution.to_dict() for solution in self.solutions],
            "leaves": [leaf.summary() for leaf in self.leaves],
            "errors": dict(self.errors),
            "complete": self.complete,
        }


def likelihood_residual(S: Any, loadings: Sequence[Sequence[float]]) -> float:
    """Max-norm of ``{S - LL' - diag(S - LL')} S^-1 L`` over the free entries."""

    S = S.as_array() if isinstance(S, FactorProblem) else np.asarray(S, dtype=float)
    L = np.asarray(loadings, dtype=float)
    if L.ndim == 1:
        L = L[:, None]
    residual = S - L @ L.T
    np.fill_diagonal(residual, 0.0)
    product = residual @ np.linalg.solve(S, L)
    return float(max(abs(product[i, j]) for i, j in loading_layout(*L.shape)))


def _interval_psi(prob: FactorProblem, coordinates: Sequence[Interval]) -> List[Interval]:
    matrix = prob.loadings_from_vector(list(coordinates))
    return list(recover_psi(matrix, prob.covariance))  # type: ignore[arg-type]


def _candidate_from_point(prob: FactorProblem, leaf: DecompositionNode, point: RealPoint) -> CandidateSolution:
    psi_intervals = _interval_psi(prob, point.coordinates)
    psi_values = [float(value.midpoint) for value in psi_intervals]
    for index, branch in enumerate(leaf.label[: prob.p]):
        if branch == "0":
            psi_values[index] = 0.0
    loadings = tuple(tuple(float(value) for value in row) for row in prob.loadings_from_vector(list(point.values())))
    exact_loadings = exact_psi = None
    rational = point.rational()
    if rational is not None:
        exact_matrix = prob.loadings_from_vector(list(rational))
        exact_loadings = tuple(tuple(Fraction(value) for value in row) for row in exact_matrix)
        exact_psi = tuple(Fraction(value) for value in recover_psi(exact_matrix, prob.covariance))
        psi_values = [float(value) for value in exact_psi]
    return CandidateSolution(
        loadings=loadings,
        psi=tuple(psi_values),
        leaf=leaf.label,
        sample_only=point.sample_only,
        exact=rational is not None,
        exact_loadings=exact_loadings,
        exact_psi=exact_psi,
        residual=likelihood_residual(prob, loadings),
        point=point,
    )


def _same_point(first: RealPoint, second: RealPoint) -> bool:
    if len(first.coordinates) != len(second.coordinates):
        return False
    if first.exact and second.exact:
        return first.rational() == second.rational()
    overlap = all(a.overlaps(b) for a, b in zip(first.coordinates, second.coordinates))
    if not overlap:
        return False
    first, second = first.refine(DUPLICATE_REFINEMENT_WIDTH), second.refine(DUPLICATE_REFINEMENT_WIDTH)
    return all(a.overlaps(b) for a, b in zip(first.coordinates, second.coordinates))


def _deduplicate(candidates: List[CandidateSolution]) -> List[CandidateSolution]:
    kept: List[CandidateSolution] = []
    for candidate in candidates:
        if candidate.point is None or not any(
            other.point is not None and _same_point(candidate.point, other.point) for other in kept
        ):
            kept.append(candidate)
        else:
            LOGGER.debug("Dropping duplicate solution from leaf %s", candidate.leaf)
    return kept


@dataclass(frozen=True)
class _LeafJob:
    leaf: DecompositionNode
    width: Fraction
    tolerance: Fraction
    max_rounds: int
    slice_points: int
    slice_retries: int
    seed: int
    budget: Tuple[Tuple[str, Any], ...]


def _solve_leaf(job: _LeafJob) -> List[RealPoint]:
    leaf = job.leaf
    budget = branch_budget(dict(job.budget))
    if leaf.status == "ZeroDim":
        return solve_triangular(
            leaf.lex_basis(**budget), width=job.width, tolerance=job.tolerance, max_rounds=job.max_rounds
        )
    if leaf.status == "PositiveDim" and leaf.gb_grevlex is not None:
        try:
            return slice_positive_dimensional(
                leaf.gb_grevlex,
                job.slice_points,
                job.seed,
                retries=job.slice_retries,
                tolerance=job.tolerance,
                **budget,
            )
        except EmptySample:
            LOGGER.info("Leaf %s: no real sample point found", leaf.label)
            return []
    return []


def enumerate_solutions(
    prob: FactorProblem,
    settings: Optional[AlgebraSettings] = None,
    *,
    seed: int = 0,
    pool: Optional[WorkerPool] = None,
) -> SolutionSet:
    """All real solutions of the likelihood equations, leaf by leaf.

    Every sign representative is kept; use :func:`collapse_sign_classes` to group them.
    Branch failures are collected in ``errors`` and the remaining leaves are still solved.
    """

    settings = settings or AlgebraSettings()
    pool = pool or WorkerPool()
    ideal = build_likelihood_ideal(prob)
    leaves = decompose(
        ideal,
        prob,
        complexity_threshold=settings.complexity_threshold,
        pool=pool,
        **settings.budget(),
    )
    result = SolutionSet(prob, leaves=leaves)
    for leaf in leaves:
        if leaf.status == "Budget":
            result.errors[leaf.label] = "budget exceeded: " + ", ".join(
                f"{key}={value}" for key, value in sorted(leaf.diagnostics.items())
            )
    jobs = [
        _LeafJob(
            leaf,
            as_fraction(settings.root_width),
            as_fraction(settings.residual_tolerance),
            settings.max_refinement_rounds,
            settings.slice_points,
            settings.slice_retries,
            seed + index,
            tuple(sorted(settings.budget().items())),
        )
        for index, leaf in enumerate(leaves)
        if leaf.status in ("ZeroDim", "PositiveDim")
    ]
    candidates: List[CandidateSolution] = []
    for job, outcome in zip(jobs, pool.run(_solve_leaf, jobs)):
        if outcome.error is not None:
            if not isinstance(outcome.error, ExactFAError):
                raise outcome.error
            LOGGER.warning("Leaf %s could not be solved: %s", job.leaf.label, outcome.error)
            result.errors[job.leaf.label] = str(outcome.error)
            continue
        points = outcome.value or []
        LOGGER.info("Leaf %s: %d real points", job.leaf.label, len(points))
        candidates.extend(_candidate_from_point(prob, job.leaf, point) for point in points)
    result.solutions = _deduplicate(candidates)
    return result


def collapse_sign_classes(solutions: Sequence[CandidateSolution]) -> List[CandidateSolution]:
    """One representative per class of solutions equal up to column signs."""

    seen = set()
    classes: List[CandidateSolution] = []
    for solution in solutions:
        key = solution.sign_key()
        if key in seen:
            continue
        seen.add(key)
        classes.append(solution)
    return classes


def format_solution(solution: CandidateSolution, digits: int = 12) -> str:
    if solution.exact_loadings is not None and solution.exact_psi is not None:
        psi = ", ".join(str(value) for value in solution.exact_psi)
        loadings = "; ".join(", ".join(str(value) for value in row) for row in solution.exact_loadings)
    else:
        psi = ", ".join(to_decimal_string(Fraction(repr(value)), digits) for value in solution.psi)
        loadings = "; ".join(
            ", ".join(to_decimal_string(Fraction(repr(value)), digits) for value in row) for row in solution.loadings
        )
    return f"[{solution.leaf}] psi=({psi}) L=({loadings})"


__all__ = [
    "CandidateSolution",
    "SolutionSet",
    "canonicalize_sign",
    "collapse_sign_classes",
    "enumerate_solutions",
    "format_solution",
    "likelihood_residual",
    "recover_psi",
]

"""Covariance interpolation study and Monte-Carlo pattern tables."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..classify.fitters import psi_profile
from ..classify.pattern import PATTERNS, SolutionReport, classify_exact, classify_numeric
from ..config import AlgebraSettings, ClassifyMode, FitSettings
from ..errors import DomainError, ExactFAError
from ..faml.problem import FactorProblem
from ..pool import WorkerPool
from .simulate import SimulationModel, interpolate_covariance, simulate_covariance

LOGGER = logging.getLogger(__name__)

RationalRows = Sequence[Sequence[Fraction]]

STUDY_FIELDS = ("t", "pattern", "discrepancy", "psi_min", "fisher_min_eig", "residual", "error")
PROFILE_FIELDS = ("t", "psi_index", "psi_value", "discrepancy")
RUN_FIELDS = ("run", "pattern", "discrepancy", "psi_min", "fisher_min_eig", "residual", "error")
TABLE_FIELDS = ("model", "runs", "mode") + PATTERNS


def require_desk_scale(p: int, k: int, algebra: AlgebraSettings) -> None:
    """Exact mode is limited to small problems unless ``allow_large`` is set."""

    if algebra.allow_large:
        return
    if k > 1 or p > algebra.max_exact_variables:
        raise DomainError(
            f"exact mode with p={p}, k={k} can run for weeks; "
            f"limits are p <= {algebra.max_exact_variables}, k = 1 (pass --i-have-time to override)"
        )


def classify_matrix(
    S: RationalRows,
    k: int,
    mode: ClassifyMode,
    *,
    fit: FitSettings,
    algebra: AlgebraSettings,
    seed: int = 0,
    ridge: Fraction = Fraction(0),
    pool: Optional[WorkerPool] = None,
) -> SolutionReport:
    if mode == "exact":
        prob = FactorProblem(S, k, ridge, fit.sample_size)
        require_desk_scale(prob.p, k, algebra)
        return classify_exact(prob, algebra, fit, seed=seed, pool=pool)
    if mode == "numeric":
        matrix = np.array([[float(value) for value in row] for row in S]) + float(ridge) * np.eye(len(S))
        return classify_numeric(matrix, k, seed=seed, settings=fit, pool=pool)
    raise ValueError(f"mode must be 'exact' or 'numeric', got {mode!r}")


def _report_row(report: SolutionReport, **extra: Any) -> Dict[str, Any]:
    row = {
        "pattern": report.pattern,
        "discrepancy": report.discrepancy,
        "psi_min": report.psi_min,
        "fisher_min_eig": report.fisher_min_eigenvalue,
        "residual": report.eqdiff0_residual,
        "error": report.diagnostics.get("error", ""),
    }
    row.update(extra)
    return row


# ----------------------------------------------------------------------
# Interpolation
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Transition:
    lower: Fraction
    upper: Fraction
    pattern_lower: str
    pattern_upper: str

    @property
    def t(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": float(self.t),
            "lower": str(self.lower),
            "upper": str(self.upper),
            "from": self.pattern_lower,
            "to": self.pattern_upper,
        }


@dataclass
class InterpolationResult:
    rows: List[Dict[str, Any]] = field(default_factory=list)
    reports: List[SolutionReport] = field(default_factory=list)
    transitions: List[Transition] = field(default_factory=list)
    profiles: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "transitions": [transition.to_dict() for transition in self.transitions],
            "profile_points": len(self.profiles),
        }


def grid_points(count: int) -> List[Fraction]:
    if count < 2:
        raise DomainError("an interpolation grid needs at least two points")
    return [Fraction(index, count - 1) for index in range(count)]


def _safe_classify(S: RationalRows, t: Fraction, k: int, mode: ClassifyMode, **kwargs: Any) -> SolutionReport:
    try:
        return classify_matrix(S, k, mode, **kwargs)
    except ExactFAError as exc:
        LOGGER.warning("Classification at t=%s failed: %s", t, exc)
        return SolutionReport("NoSolution", diagnostics={"error": str(exc)})


def interpolate_study(
    S_a: RationalRows,
    S_b: RationalRows,
    grid: Sequence[Fraction],
    k: int,
    *,
    mode: ClassifyMode = "numeric",
    fit: Optional[FitSettings] = None,
    algebra: Optional[AlgebraSettings] = None,
    seed: int = 0,
    transition_steps: int = 0,
    profile_index: Optional[int] = None,
    profile_points: int = 21,
    pool: Optional[WorkerPool] = None,
) -> InterpolationResult:
    """Classify ``S(t) = t S_a + (1 - t) S_b`` along ``grid``.

    Adjacent grid points with different patterns are bisected ``transition_steps`` times.
    With ``profile_index`` set, the minimum discrepancy as a function of that unique
    variance is tabulated at every grid point.
    """

    fit = fit or FitSettings()
    algebra = algebra or AlgebraSettings()
    points = sorted(Fraction(value) for value in grid)
    if not points or points[0] < 0 or points[-1] > 1:
        raise DomainError("interpolation grid must lie in [0, 1]")
    options = {"fit": fit, "algebra": algebra, "seed": seed, "pool": pool}
    result = InterpolationResult()

    for t in points:
        S_t = interpolate_covariance(S_a, S_b, t)
        report = _safe_classify(S_t, t, k, mode, **options)
        result.reports.append(report)
        result.rows.append(_report_row(report, t=float(t)))
        LOGGER.info("t=%.4f: %s", float(t), report.pattern)
        if profile_index is not None:
            S_float = np.array([[float(value) for value in row] for row in S_t])
            scale = S_float[profile_index, profile_index]
            values = np.linspace(-0.5 * scale, scale, profile_points)
            for psi_value, value in psi_profile(S_float, k, profile_index, values, fit):
                result.profiles.append(
                    {"t": float(t), "psi_index": profile_index + 1, "psi_value": psi_value, "discrepancy": value}
                )

    for (t0, left), (t1, right) in zip(zip(points, result.reports), zip(points[1:], result.reports[1:])):
        if left.pattern == right.pattern:
            continue
        lower, upper = t0, t1
        for _ in range(transition_steps):
            middle = (lower + upper) / 2
            pattern = _safe_classify(interpolate_covariance(S_a, S_b, middle), middle, k, mode, **options).pattern
            if pattern == left.pattern:
                lower = middle
            else:
                upper = middle
        transition = Transition(lower, upper, left.pattern, right.pattern)
        LOGGER.info("Pattern changes from %s to %s near t=%.6f", left.pattern, right.pattern, float(transition.t))
        result.transitions.append(transition)
    return result


# ----------------------------------------------------------------------
# Monte Carlo
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class _RunJob:
    model: SimulationModel
    run: int
    seed: int
    mode: ClassifyMode
    decimals: Optional[int]
    fit: FitSettings
    algebra: AlgebraSettings


def _run_once(job: _RunJob) -> SolutionReport:
    prob = simulate_covariance(job.model, job.seed, job.decimals, run=job.run)
    return classify_matrix(prob.S, prob.k, job.mode, fit=job.fit, algebra=job.algebra, seed=job.seed + job.run)


@dataclass
class MonteCarloResult:
    model: str
    mode: str
    rows: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def counts(self) -> Dict[str, int]:
        tally = Counter(row["pattern"] for row in self.rows)
        return {pattern: tally.get(pattern, 0) for pattern in PATTERNS}

    def table(self) -> List[Dict[str, Any]]:
        return [{"model": self.model, "runs": len(self.rows), "mode": self.mode, **self.counts}]

    def to_dict(self) -> Dict[str, Any]:
        return {"model": self.model, "mode": self.mode, "runs": len(self.rows), "counts": self.counts, "rows": self.rows}


def monte_carlo(
    model: SimulationModel,
    runs: int,
    mode: ClassifyMode = "numeric",
    *,
    seed: int = 0,
    decimals: Optional[int] = None,
    fit: Optional[FitSettings] = None,
    algebra: Optional[AlgebraSettings] = None,
    pool: Optional[WorkerPool] = None,
) -> MonteCarloResult:
    """Simulate and classify ``runs`` datasets; a failed run counts as NoSolution."""

    if runs < 1:
        raise DomainError("at least one run is required")
    fit = fit or FitSettings()
    algebra = algebra or AlgebraSettings()
    if mode == "exact":
        require_desk_scale(model.p, model.k, algebra)
    pool = pool or WorkerPool()
    jobs = [_RunJob(model, run, seed, mode, decimals, fit, algebra) for run in range(runs)]
    result = MonteCarloResult(model.name, mode)
    for job, outcome in zip(jobs, pool.run(_run_once, jobs)):
        if outcome.error is not None:
            LOGGER.warning("Run %d failed: %s", job.run, outcome.error)
            report = SolutionReport("NoSolution", diagnostics={"error": str(outcome.error)})
        else:
            assert outcome.value is not None
            report = outcome.value
        LOGGER.info("Run %d: %s", job.run, report.pattern)
        result.rows.append(_report_row(report, run=job.run))
    LOGGER.info("%s: %s", model.name, ", ".join(f"{key}={value}" for key, value in result.counts.items()))
    return result


__all__ = [
    "InterpolationResult",
    "MonteCarloResult",
    "PROFILE_FIELDS",
    "RUN_FIELDS",
    "STUDY_FIELDS",
    "TABLE_FIELDS",
    "Transition",
    "classify_matrix",
    "grid_points",
    "interpolate_study",
    "monte_carlo",
    "require_desk_scale",
]

"""Proper / Improper / NoSolution verdicts for a set of candidate solutions."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Literal, Optional, Sequence

import numpy as np

from ..config import AlgebraSettings, FitSettings
from ..errors import DomainError, SingularSigma
from ..faml.problem import FactorProblem
from ..faml.solutions import CandidateSolution, enumerate_solutions, likelihood_residual
from ..pool import WorkerPool
from .evaluate import discrepancy, eqdiff0_residual, implied_covariance, observed_fisher
from .fitters import FitResult, best_fit, fit_multistart

LOGGER = logging.getLogger(__name__)

Pattern = Literal["Proper", "Improper", "NoSolution"]
PATTERNS = ("Proper", "Improper", "NoSolution")


@dataclass
class SolutionReport:
    pattern: Pattern
    best: Optional[CandidateSolution] = None
    discrepancy: float = float("nan")
    fisher_min_eigenvalue: float = float("nan")
    eqdiff0_residual: float = float("nan")
    psi_min: float = float("nan")
    algorithm: str = "exact"
    starts: int = 0
    candidates: int = 0
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "pattern": self.pattern,
            "discrepancy": self.discrepancy,
            "psi_min": self.psi_min,
            "fisher_min_eig": self.fisher_min_eigenvalue,
            "residual": self.eqdiff0_residual,
            "algorithm": self.algorithm,
            "starts": self.starts,
            "candidates": self.candidates,
        }
        if self.best is not None:
            data["best"] = self.best.to_dict()
        if self.diagnostics:
            data["diagnostics"] = dict(self.diagnostics)
        return data


def _scored(candidates: Sequence[CandidateSolution], S: np.ndarray) -> List[tuple]:
    scored = []
    for candidate in candidates:
        if np.linalg.eigvalsh(implied_covariance(candidate.L, candidate.Psi))[0] <= 0.0:
            LOGGER.debug("Candidate from leaf %s has an indefinite implied covariance", candidate.leaf)
            continue
        try:
            value = discrepancy(S, candidate.L, candidate.Psi)
        except SingularSigma:
            LOGGER.debug("Candidate from leaf %s has a singular implied covariance", candidate.leaf)
            continue
        scored.append((value, candidate.leaf, candidate.loadings, candidate.psi, candidate))
    scored.sort(key=lambda item: item[:4])
    return scored


def classify_pattern(
    candidates: Sequence[CandidateSolution],
    S: Any,
    N: Optional[int] = None,
    settings: Optional[FitSettings] = None,
) -> SolutionReport:
    """Pick the discrepancy minimizer and check it against the likelihood equations and the Fisher information.

    Candidates whose implied covariance is not positive definite are skipped. Ties in
    discrepancy go to the smaller leaf label.
    """

    settings = settings or FitSettings()
    if not candidates:
        raise DomainError("classify_pattern needs at least one candidate solution")
    N = settings.sample_size if N is None else N
    S = np.asarray(S, dtype=float)
    scored = _scored(candidates, S)
    if not scored:
        return SolutionReport("NoSolution", candidates=len(candidates), diagnostics={"reason": "no candidate has a positive definite implied covariance"})
    value, _, _, _, best = scored[0]
    residual = eqdiff0_residual(S, best.L, best.Psi)
    psi_min = float(np.min(best.Psi))
    diagnostics: Dict[str, Any] = {}
    try:
        fisher = observed_fisher(S, best.L, best.Psi, N, tolerance=settings.fisher_tolerance)
        min_eigenvalue, positive_definite = fisher.min_eigenvalue, fisher.positive_definite
        diagnostics["fisher_parameters"] = fisher.parameters
        if fisher.folded_columns:
            diagnostics["fisher_folded_columns"] = fisher.folded_columns
    except SingularSigma as exc:
        diagnostics["fisher"] = str(exc)
        min_eigenvalue, positive_definite = float("nan"), False

    if residual < settings.eqdiff0_tolerance and positive_definite:
        pattern: Pattern = "Proper" if psi_min > settings.psi_tolerance else "Improper"
    else:
        pattern = "NoSolution"
        diagnostics["reason"] = "likelihood equations not satisfied" if residual >= settings.eqdiff0_tolerance else "Fisher information not positive definite"
    LOGGER.info("Pattern %s (q=%.6g, psi_min=%.4g, leaf %s)", pattern, value, psi_min, best.leaf)
    return SolutionReport(
        pattern,
        best=best,
        discrepancy=value,
        fisher_min_eigenvalue=min_eigenvalue,
        eqdiff0_residual=residual,
        psi_min=psi_min,
        candidates=len(candidates),
        diagnostics=diagnostics,
    )


def candidate_from_fit(result: FitResult, S: np.ndarray) -> CandidateSolution:
    return CandidateSolution(
        loadings=tuple(tuple(float(value) for value in row) for row in result.L),
        psi=tuple(float(value) for value in result.Psi),
        leaf=f"numeric:{result.algorithm}",
        residual=likelihood_residual(S, result.L),
    )


def classify_numeric(
    S: Any,
    k: int,
    T: Optional[int] = None,
    seed: int = 0,
    settings: Optional[FitSettings] = None,
    *,
    pool: Optional[WorkerPool] = None,
) -> SolutionReport:
    """Multi-start fits from uniform random unique variances, then the verdict on the best fit."""

    settings = settings or FitSettings()
    if T is not None:
        settings = replace(settings, starts=T)
    if settings.starts < 1:
        raise DomainError("at least one start is required")
    S = np.asarray(S, dtype=float)
    results = fit_multistart(S, k, settings, seed=seed, pool=pool)
    best = best_fit(results)
    if best is None:
        return SolutionReport(
            "NoSolution",
            algorithm=settings.algorithm,
            starts=settings.starts,
            diagnostics={"reason": "all fits failed", "fitted": len(results)},
        )
    report = classify_pattern([candidate_from_fit(best, S)], S, settings.sample_size, settings)
    report.algorithm = settings.algorithm
    report.starts = settings.starts
    report.candidates = len(results)
    report.diagnostics["converged"] = sum(result.converged for result in results)
    return report


def classify_exact(
    prob: FactorProblem,
    algebra: Optional[AlgebraSettings] = None,
    settings: Optional[FitSettings] = None,
    *,
    seed: int = 0,
    pool: Optional[WorkerPool] = None,
) -> SolutionReport:
    """The verdict over every real solution of the likelihood equations."""

    settings = settings or FitSettings()
    solutions = enumerate_solutions(prob, algebra, seed=seed, pool=pool)
    if not len(solutions):
        report = SolutionReport("NoSolution", diagnostics={"reason": "no real solutions"})
    else:
        report = classify_pattern(list(solutions), prob.as_array(), prob.sample_size, settings)
    if solutions.errors:
        report.diagnostics["branch_errors"] = dict(solutions.errors)
    report.diagnostics["complete"] = solutions.complete
    return report


__all__ = [
    "PATTERNS",
    "Pattern",
    "SolutionReport",
    "candidate_from_fit",
    "classify_exact",
    "classify_numeric",
    "classify_pattern",
]

"""Numerical maximum-likelihood fitters: Lawley eigen iteration, Jennrich, EM."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..config import FitSettings
from ..errors import SingularSigma
from ..faml.solutions import canonicalize_sign
from ..pool import WorkerPool
from .evaluate import discrepancy, eqdiff0_residual
from .linalg import inv_sqrtm, rotate_lower_triangular, sqrtm_psd, symmetric_eigen

LOGGER = logging.getLogger(__name__)

# scipy reports precision loss long after the gradient is as small as doubles allow
STALL_GRADIENT = 1e-6


@dataclass(frozen=True, eq=False)
class FitResult:
    L: np.ndarray
    Psi: np.ndarray
    converged: bool
    iterations: int
    discrepancy: float
    algorithm: str
    gradient_norm: float = float("nan")
    start: Optional[np.ndarray] = field(default=None, repr=False)
    history: Tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "L": self.L.tolist(),
            "psi": self.Psi.tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "discrepancy": self.discrepancy,
            "gradient_norm": self.gradient_norm,
        }


def _prepare(S: Any, k: int) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square covariance matrix, got shape {S.shape}")
    if not 1 <= k < S.shape[0]:
        raise ValueError(f"number of factors must satisfy 1 <= k < p, got k={k}")
    return S


def default_start(S: np.ndarray, k: int) -> np.ndarray:
    """``(1 - k / 2p) / diag(S^-1)``, the usual ``factanal`` starting point."""

    p = S.shape[0]
    return (1.0 - 0.5 * k / p) / np.diag(np.linalg.inv(S))


def _finish(
    S: np.ndarray,
    L: np.ndarray,
    psi: np.ndarray,
    algorithm: str,
    converged: bool,
    iterations: int,
    gradient_norm: float,
    start: Optional[np.ndarray],
    history: Sequence[float] = (),
    warn: bool = False,
) -> FitResult:
    L = canonicalize_sign(rotate_lower_triangular(L))
    try:
        value = discrepancy(S, L, psi)
    except SingularSigma:
        value = float("inf")
    if not converged:
        message = f"{algorithm} fit did not converge after {iterations} iterations (gradient {gradient_norm:.3e})"
        if warn:
            warnings.warn(message, RuntimeWarning, stacklevel=3)
        else:
            LOGGER.debug(message)
    return FitResult(L, np.asarray(psi, dtype=float), converged, iterations, value, algorithm, gradient_norm, start, tuple(history))


# ----------------------------------------------------------------------
# Lawley
# ----------------------------------------------------------------------
def lawley_profile(psi: np.ndarray, S: np.ndarray, k: int) -> Tuple[float, np.ndarray]:
    """Minimum of the discrepancy over ``L`` for fixed positive ``psi`` and the minimizing ``L``.

    Only eigenvalues above one contribute loading columns; the others stay in the sum.
    """

    root = np.sqrt(psi)
    s_star = S / np.outer(root, root)
    theta, vectors = symmetric_eigen(s_star)
    used = theta[:k] > 1.0
    rest = np.concatenate([theta[:k][~used], theta[k:]])
    value = float(np.sum(rest - np.log(rest) - 1.0))
    loadings = root[:, None] * vectors[:, :k] * np.sqrt(np.maximum(theta[:k] - 1.0, 0.0))
    return value, loadings


def _lawley_gradient(psi: np.ndarray, S: np.ndarray, k: int) -> np.ndarray:
    _, loadings = lawley_profile(psi, S, k)
    residual = loadings @ loadings.T + np.diag(psi) - S
    return np.diag(residual) / psi**2


def fit_lawley(
    S: Any,
    k: int,
    psi0: Optional[Sequence[float]] = None,
    settings: Optional[FitSettings] = None,
    *,
    warn: bool = False,
) -> FitResult:
    """Profile the loadings out through the eigen decomposition of ``Psi^-1/2 S Psi^-1/2``.

    The unique variances are optimized with L-BFGS-B and never drop below the floor.
    """

    settings = settings or FitSettings()
    S = _prepare(S, k)
    floor = settings.lawley_floor
    start = default_start(S, k) if psi0 is None else np.asarray(psi0, dtype=float)
    if np.any(start <= 0):
        raise ValueError("Lawley starting values must be positive")
    x0 = np.maximum(start, floor)
    result = minimize(
        lambda psi: lawley_profile(psi, S, k)[0],
        x0,
        jac=lambda psi: _lawley_gradient(psi, S, k),
        method="L-BFGS-B",
        bounds=[(floor, None)] * S.shape[0],
        options={"maxiter": settings.max_iterations, "gtol": settings.gradient_tolerance, "ftol": 1e-15},
    )
    psi = np.maximum(result.x, floor)
    # projected gradient: components pushing below the floor are not counted
    gradient = _lawley_gradient(psi, S, k)
    gradient[(psi <= floor) & (gradient > 0)] = 0.0
    norm = float(np.max(np.abs(gradient)))
    _, loadings = lawley_profile(psi, S, k)
    converged = bool(result.success) or norm < STALL_GRADIENT
    return _finish(S, loadings, psi, "lawley", converged, int(result.nit), norm, start, warn=warn)


# ----------------------------------------------------------------------
# Jennrich
# ----------------------------------------------------------------------
class _JennrichObjective:
    """Discrepancy as a function of unconstrained ``psi`` via ``S^-1/2 Psi S^-1/2``."""

    def __init__(self, S: np.ndarray, k: int) -> None:
        self.S = S
        self.k = k
        self.inv_root = inv_sqrtm(S)
        self.root = sqrtm_psd(S)

    def _split(self, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        gamma, vectors = symmetric_eigen(self.inv_root @ np.diag(psi) @ self.inv_root)
        gamma, vectors = gamma[::-1], vectors[:, ::-1]
        removed = np.zeros(gamma.shape, dtype=bool)
        removed[: self.k] = gamma[: self.k] < 1.0
        return gamma, vectors, removed

    def value_and_gradient(self, psi: np.ndarray) -> Tuple[float, np.ndarray]:
        gamma, vectors, removed = self._split(psi)
        rest = gamma[~removed]
        if np.any(rest <= 0.0):
            return float("inf"), np.zeros_like(psi)
        value = float(np.sum(np.log(rest) + 1.0 / rest - 1.0))
        projected = (self.inv_root @ vectors[:, ~removed]) ** 2
        gradient = projected @ (1.0 / rest - 1.0 / rest**2)
        return value, gradient

    def loadings(self, psi: np.ndarray) -> np.ndarray:
        gamma, vectors, removed = self._split(psi)
        loadings = np.zeros((self.S.shape[0], self.k))
        columns = np.flatnonzero(removed)
        scale = np.sqrt(np.maximum(1.0 - gamma[columns], 0.0))
        loadings[:, : columns.size] = self.root @ vectors[:, columns] * scale
        return loadings


def fit_jennrich(
    S: Any,
    k: int,
    psi0: Optional[Sequence[float]] = None,
    settings: Optional[FitSettings] = None,
    *,
    warn: bool = False,
) -> FitResult:
    """Quasi-Newton over unconstrained ``psi``; zero and negative unique variances are allowed."""

    settings = settings or FitSettings()
    S = _prepare(S, k)
    objective = _JennrichObjective(S, k)
    start = default_start(S, k) if psi0 is None else np.asarray(psi0, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        result = minimize(
            objective.value_and_gradient,
            start,
            jac=True,
            method="BFGS",
            options={"maxiter": settings.max_iterations, "gtol": settings.gradient_tolerance},
        )
    psi = np.asarray(result.x, dtype=float)
    _, gradient = objective.value_and_gradient(psi)
    norm = float(np.max(np.abs(gradient)))
    converged = bool(result.success) or norm < STALL_GRADIENT
    return _finish(S, objective.loadings(psi), psi, "jennrich", converged, int(result.nit), norm, start, warn=warn)


# ----------------------------------------------------------------------
# EM
# ----------------------------------------------------------------------
def fit_em(
    S: Any,
    k: int,
    init: Optional[Sequence[float]] = None,
    settings: Optional[FitSettings] = None,
    *,
    loadings0: Optional[np.ndarray] = None,
    warn: bool = False,
) -> FitResult:
    """Rubin-Thayer EM on the sufficient statistic ``S``; the discrepancy never increases."""

    settings = settings or FitSettings()
    S = _prepare(S, k)
    p = S.shape[0]
    start = default_start(S, k) if init is None else np.asarray(init, dtype=float)
    if np.any(start <= 0):
        raise ValueError("EM starting unique variances must be positive")
    psi = start.copy()
    if loadings0 is None:
        _, L = lawley_profile(psi, S, k)
        if not np.any(L):
            values, vectors = symmetric_eigen(S)
            L = vectors[:, :k] * np.sqrt(np.maximum(values[:k], 0.0)) * 0.5
    else:
        L = np.asarray(loadings0, dtype=float).reshape(p, k)
    history = [discrepancy(S, L, psi)]
    converged = False
    iterations = 0
    for iterations in range(1, settings.max_iterations + 1):
        sigma = L @ L.T + np.diag(psi)
        beta = np.linalg.solve(sigma, L).T
        expected = np.eye(k) - beta @ L + beta @ S @ beta.T
        L = S @ beta.T @ np.linalg.inv(expected)
        psi = np.diag(S - L @ beta @ S).copy()
        history.append(discrepancy(S, L, psi))
        if abs(history[-2] - history[-1]) < settings.gradient_tolerance:
            converged = True
            break
    norm = eqdiff0_residual(S, L, psi)
    return _finish(S, L, psi, "em", converged, iterations, norm, start, history, warn=warn)


FITTERS = {"lawley": fit_lawley, "jennrich": fit_jennrich, "em": fit_em}


def fit(S: Any, k: int, psi0: Optional[Sequence[float]] = None, settings: Optional[FitSettings] = None) -> FitResult:
    settings = settings or FitSettings()
    try:
        fitter = FITTERS[settings.algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {settings.algorithm!r}; choose from {sorted(FITTERS)}") from None
    return fitter(S, k, psi0, settings)


# ----------------------------------------------------------------------
# Multi-start and profiles
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class _StartJob:
    S: Tuple[Tuple[float, ...], ...]
    k: int
    psi0: Tuple[float, ...]
    settings: FitSettings


def _run_start(job: _StartJob) -> FitResult:
    return fit(np.array(job.S), job.k, np.array(job.psi0), job.settings)


def random_starts(S: np.ndarray, starts: int, seed: int) -> np.ndarray:
    """Uniform(0, 1) unique variances, scaled by the diagonal of ``S``."""

    rng = np.random.default_rng(seed)
    draws = rng.uniform(0.0, 1.0, size=(starts, S.shape[0]))
    return np.maximum(draws, np.finfo(float).eps) * np.diag(S)


def fit_multistart(
    S: Any,
    k: int,
    settings: Optional[FitSettings] = None,
    *,
    seed: int = 0,
    pool: Optional[WorkerPool] = None,
) -> List[FitResult]:
    """One fit per random start; failed starts are logged and skipped."""

    settings = settings or FitSettings()
    S = _prepare(S, k)
    pool = pool or WorkerPool()
    frozen = tuple(tuple(float(value) for value in row) for row in S)
    jobs = [_StartJob(frozen, k, tuple(start), settings) for start in random_starts(S, settings.starts, seed)]
    results: List[FitResult] = []
    for job, outcome in zip(jobs, pool.run(_run_start, jobs)):
        if outcome.error is not None:
            LOGGER.warning("Fit from start %s failed: %s", np.round(job.psi0, 4).tolist(), outcome.error)
            continue
        assert outcome.value is not None
        results.append(outcome.value)
    LOGGER.info(
        "%s: %d of %d starts fitted, %d converged",
        settings.algorithm,
        len(results),
        len(jobs),
        sum(result.converged for result in results),
    )
    return results


def best_fit(results: Sequence[FitResult]) -> Optional[FitResult]:
    finite = [result for result in results if np.isfinite(result.discrepancy)]
    if not finite:
        return None
    return min(finite, key=lambda result: (result.discrepancy, not result.converged))


def psi_profile(
    S: Any,
    k: int,
    index: int,
    grid: Sequence[float],
    settings: Optional[FitSettings] = None,
) -> List[Tuple[float, float]]:
    """Minimum discrepancy with ``psi[index]`` held at each grid value.

    The other unique variances are optimized without bounds, warm-started along the grid.
    """

    settings = settings or FitSettings()
    S = _prepare(S, k)
    p = S.shape[0]
    if not 0 <= index < p:
        raise ValueError(f"psi index {index} out of range for p={p}")
    objective = _JennrichObjective(S, k)
    free = [position for position in range(p) if position != index]
    current = default_start(S, k)[free]
    rows: List[Tuple[float, float]] = []
    for fixed in grid:

        def partial(values: np.ndarray, fixed: float = float(fixed)) -> Tuple[float, np.ndarray]:
            psi = np.empty(p)
            psi[index] = fixed
            psi[free] = values
            value, gradient = objective.value_and_gradient(psi)
            return value, gradient[free]

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            result = minimize(
                partial,
                current,
                jac=True,
                method="BFGS",
                options={"maxiter": settings.max_iterations, "gtol": settings.gradient_tolerance},
            )
        if np.isfinite(result.fun):
            current = result.x
        rows.append((float(fixed), float(result.fun)))
        LOGGER.debug("Profile psi%d=%.4f: q=%.6g", index + 1, fixed, result.fun)
    return rows


__all__ = [
    "FITTERS",
    "FitResult",
    "best_fit",
    "default_start",
    "fit",
    "fit_em",
    "fit_jennrich",
    "fit_lawley",
    "fit_multistart",
    "lawley_profile",
    "psi_profile",
    "random_starts",
]

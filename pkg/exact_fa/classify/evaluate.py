"""Discrepancy, likelihood-equation residual and observed Fisher information."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_FISHER_TOLERANCE, DEFAULT_SAMPLE_SIZE
from ..errors import SingularSigma
from ..faml.problem import loading_layout
from .linalg import symmetric_eigen

LOGGER = logging.getLogger(__name__)

CONDITION_LIMIT = 1e14
FISHER_STEP = 1e-4
PROBE_RETRIES = 3
DEGENERATE_LOADING = 1e-8


def _as_arrays(S: Any, L: Any, Psi: Any) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    S = np.asarray(S, dtype=float)
    L = np.asarray(L, dtype=float)
    if L.ndim == 1:
        L = L[:, None]
    Psi = np.asarray(Psi, dtype=float)
    if Psi.ndim == 2:
        Psi = np.diag(Psi)
    if S.shape != (L.shape[0], L.shape[0]) or Psi.shape != (L.shape[0],):
        raise ValueError(f"inconsistent shapes S{S.shape}, L{L.shape}, Psi{Psi.shape}")
    return S, L, Psi


def implied_covariance(L: Any, Psi: Any) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim == 1:
        L = L[:, None]
    return L @ L.T + np.diag(np.asarray(Psi, dtype=float))


def _inverse(sigma: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(sigma)) or np.linalg.cond(sigma) > CONDITION_LIMIT:
        raise SingularSigma("implied covariance LL' + Psi is singular")
    return np.linalg.inv(sigma)


def discrepancy(S: Any, L: Any, Psi: Any) -> float:
    """``log|Sigma| + tr(Sigma^-1 S) - log|S| - p`` with ``Sigma = LL' + Psi``."""

    S, L, Psi = _as_arrays(S, L, Psi)
    sigma = implied_covariance(L, Psi)
    inverse = _inverse(sigma)
    _, logdet_sigma = np.linalg.slogdet(sigma)
    _, logdet_s = np.linalg.slogdet(S)
    return float(logdet_sigma + np.trace(inverse @ S) - logdet_s - S.shape[0])


def eqdiff0_residual(S: Any, L: Any, Psi: Any) -> float:
    """Max-norm of ``Sigma^-1 (Sigma - S) Sigma^-1 L`` and of the diagonal of ``Sigma^-1 (Sigma - S) Sigma^-1``."""

    S, L, Psi = _as_arrays(S, L, Psi)
    sigma = implied_covariance(L, Psi)
    inverse = _inverse(sigma)
    middle = inverse @ (sigma - S) @ inverse
    return float(max(np.max(np.abs(middle @ L)), np.max(np.abs(np.diag(middle)))))


@dataclass(frozen=True)
class FisherInformation:
    matrix: np.ndarray
    min_eigenvalue: float
    positive_definite: bool
    asymmetry: float = 0.0
    folded_columns: int = 0

    @property
    def parameters(self) -> int:
        return int(self.matrix.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "min_eigenvalue": self.min_eigenvalue,
            "positive_definite": self.positive_definite,
            "asymmetry": self.asymmetry,
            "size": self.parameters,
            "folded_columns": self.folded_columns,
        }


def free_parameters(L: np.ndarray, Psi: np.ndarray) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """Lower-triangular loadings row by row, then the unique variances."""

    p, k = L.shape
    layout = loading_layout(p, k)
    values = [L[i, j] for i, j in layout] + list(Psi)
    return np.array(values, dtype=float), layout


def _unpack(theta: np.ndarray, layout: Sequence[Tuple[int, int]], p: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    L = np.zeros((p, k))
    for value, (i, j) in zip(theta, layout):
        L[i, j] = value
    return L, theta[len(layout):]


def fold_degenerate_columns(L: np.ndarray, Psi: np.ndarray, tol: float = DEGENERATE_LOADING) -> Tuple[np.ndarray, np.ndarray]:
    """Move loading columns with at most one nonzero entry into ``Psi``.

    Such a column is not identified; ``LL' + Psi`` is unchanged.
    """

    keep = np.count_nonzero(np.abs(L) > tol, axis=0) > 1
    folded = Psi + np.sum(L[:, ~keep] ** 2, axis=1)
    return L[:, keep], folded


def _hessian(func, theta: np.ndarray, steps: np.ndarray) -> np.ndarray:
    size = theta.size
    hessian = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            total = 0.0
            for si, sj, sign in ((1, 1, 1.0), (1, -1, -1.0), (-1, 1, -1.0), (-1, -1, 1.0)):
                probe = theta.copy()
                probe[i] += si * steps[i]
                probe[j] += sj * steps[j]
                total += sign * func(probe)
            hessian[i, j] = total / (4.0 * steps[i] * steps[j])
    return hessian


def observed_fisher(
    S: Any,
    L: Any,
    Psi: Any,
    N: int = DEFAULT_SAMPLE_SIZE,
    *,
    tolerance: float = DEFAULT_FISHER_TOLERANCE,
) -> FisherInformation:
    """Finite-difference Hessian of ``(N/2) q`` over the free loadings and unique variances.

    Central differences with step ``1e-4 * max(1, |theta|)`` and one Richardson halving.
    Unidentified loading columns are folded into ``Psi`` first (see :func:`fold_degenerate_columns`);
    the Hessian then has fewer parameters and ``folded_columns`` records how many were dropped.
    A singular probe shrinks the step; after ``PROBE_RETRIES`` failures SingularSigma propagates.
    """

    S, L, Psi = _as_arrays(S, L, Psi)
    columns = L.shape[1]
    L, Psi = fold_degenerate_columns(L, Psi)
    p, k = L.shape
    if k < columns:
        LOGGER.debug("Folded %d unidentified loading columns into Psi", columns - k)
    theta, layout = free_parameters(L, Psi)

    def objective(values: np.ndarray) -> float:
        loadings, psi = _unpack(values, layout, p, k)
        return 0.5 * N * discrepancy(S, loadings, psi)

    scale = 1.0
    for attempt in range(PROBE_RETRIES + 1):
        steps = scale * FISHER_STEP * np.maximum(1.0, np.abs(theta))
        try:
            coarse = _hessian(objective, theta, steps)
            fine = _hessian(objective, theta, steps / 2.0)
            break
        except SingularSigma:
            if attempt == PROBE_RETRIES:
                raise
            LOGGER.debug("Singular implied covariance at a probe point; shrinking the step")
            scale /= 10.0
    hessian = (4.0 * fine - coarse) / 3.0
    norm = float(np.linalg.norm(hessian)) or 1.0
    asymmetry = float(np.linalg.norm(hessian - hessian.T)) / norm
    hessian = (hessian + hessian.T) / 2.0
    values, _ = symmetric_eigen(hessian)
    min_eigenvalue = float(values[-1])
    threshold = tolerance * abs(float(np.trace(hessian))) / hessian.shape[0]
    return FisherInformation(hessian, min_eigenvalue, min_eigenvalue > threshold, asymmetry, columns - k)


__all__ = [
    "FisherInformation",
    "discrepancy",
    "eqdiff0_residual",
    "fold_degenerate_columns",
    "free_parameters",
    "implied_covariance",
    "observed_fisher",
]

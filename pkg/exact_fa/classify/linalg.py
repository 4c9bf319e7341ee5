"""Small dense linear-algebra helpers for the numerical fitters."""

from __future__ import annotations

import logging
from typing import Callable, Tuple

import numpy as np

LOGGER = logging.getLogger(__name__)

JACOBI_TOLERANCE = 1e-13
MAX_SWEEPS = 100


def _off_norm(matrix: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.tril(matrix, -1) ** 2)))


def symmetric_eigen(matrix: np.ndarray, tol: float = JACOBI_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal eigenvectors as columns.

    Cyclic Jacobi sweeps run until the off-diagonal norm is below ``tol`` relative to the
    Frobenius norm of the input.
    """

    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    a = (a + a.T) / 2.0
    n = a.shape[0]
    vectors = np.eye(n)
    scale = max(float(np.linalg.norm(a)), 1.0)
    for sweep in range(MAX_SWEEPS):
        if _off_norm(a) < tol * scale:
            break
        for k in range(n - 1):
            for l in range(k + 1, n):
                if a[k, l] == 0.0:
                    continue
                diff = a[l, l] - a[k, k]
                if abs(a[k, l]) < abs(diff) * 1.0e-36:
                    t = a[k, l] / diff
                else:
                    phi = diff / (2.0 * a[k, l])
                    t = 1.0 / (abs(phi) + np.sqrt(phi**2 + 1.0))
                    if phi < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t**2 + 1.0)
                s = t * c
                rotation = np.eye(n)
                rotation[k, k] = rotation[l, l] = c
                rotation[k, l] = s
                rotation[l, k] = -s
                a = rotation.T @ a @ rotation
                a[k, l] = a[l, k] = 0.0
                vectors = vectors @ rotation
    else:
        LOGGER.warning("Jacobi iteration stopped after %d sweeps (off-norm %.3e)", MAX_SWEEPS, _off_norm(a))
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def matrix_function(matrix: np.ndarray, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``V f(D) V'`` for a symmetric matrix."""

    values, vectors = symmetric_eigen(matrix)
    return (vectors * func(values)) @ vectors.T


def sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    return matrix_function(matrix, lambda values: np.sqrt(np.maximum(values, 0.0)))


def inv_sqrtm(matrix: np.ndarray) -> np.ndarray:
    values, vectors = symmetric_eigen(matrix)
    if values[-1] <= 0.0:
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return (vectors / np.sqrt(values)) @ vectors.T


def rotate_lower_triangular(loadings: np.ndarray) -> np.ndarray:
    """Rotate ``L`` so that its upper triangle is zero; ``LL'`` is unchanged."""

    L = np.asarray(loadings, dtype=float)
    p, k = L.shape
    if k == 1:
        return L.copy()
    # L' = QR  =>  L Q = R'
    q, _ = np.linalg.qr(L[:k, :].T)
    rotated = L @ q
    rotated[np.triu_indices(k, 1)] = 0.0
    return rotated


__all__ = ["inv_sqrtm", "matrix_function", "rotate_lower_triangular", "sqrtm_psd", "symmetric_eigen"]

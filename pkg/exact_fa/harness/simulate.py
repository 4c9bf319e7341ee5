"""Simulation models and seeded covariance generation."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import DEFAULT_DECIMALS, DEFAULT_SAMPLE_SIZE
from ..errors import DomainError
from ..faml.problem import FactorProblem
from ..utils.rationals import round_to_decimals
from .io import covariance_from_samples

LOGGER = logging.getLogger(__name__)

Matrix = Tuple[Tuple[float, ...], ...]


@dataclass(frozen=True)
class SimulationModel:
    """True loadings and unique variances; ``psi`` defaults to ``diag(I - LL')``."""

    loadings: Matrix
    psi: Optional[Tuple[float, ...]] = None
    sample_size: int = DEFAULT_SAMPLE_SIZE
    name: str = "custom"
    _psi: Tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        loadings = tuple(tuple(float(value) for value in row) for row in self.loadings)
        object.__setattr__(self, "loadings", loadings)
        if not loadings or len({len(row) for row in loadings}) != 1:
            raise DomainError("loadings must be a non-empty rectangular matrix")
        L = np.array(loadings)
        if self.psi is None:
            psi = tuple(float(value) for value in 1.0 - np.sum(L**2, axis=1))
        else:
            psi = tuple(float(value) for value in self.psi)
            if len(psi) != L.shape[0]:
                raise DomainError(f"expected {L.shape[0]} unique variances, got {len(psi)}")
        if any(value <= 0 for value in psi):
            raise DomainError(f"true unique variances must be positive, got {psi}")
        object.__setattr__(self, "_psi", psi)
        if self.sample_size < 2:
            raise DomainError("sample size must be at least 2")
        try:
            np.linalg.cholesky(self.sigma)
        except np.linalg.LinAlgError as exc:
            raise DomainError("true covariance LL' + Psi is not positive definite") from exc

    @property
    def p(self) -> int:
        return len(self.loadings)

    @property
    def k(self) -> int:
        return len(self.loadings[0])

    @property
    def L(self) -> np.ndarray:
        return np.array(self.loadings)

    @property
    def Psi(self) -> np.ndarray:
        return np.array(self._psi)

    @property
    def sigma(self) -> np.ndarray:
        return self.L @ self.L.T + np.diag(self.Psi)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "L": [list(row) for row in self.loadings],
            "psi": list(self._psi),
            "N": self.sample_size,
        }

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "SimulationModel":
        try:
            loadings = data["L"]
        except KeyError:
            raise DomainError("simulation model needs an 'L' entry") from None
        return SimulationModel(
            tuple(tuple(row) if isinstance(row, (list, tuple)) else (row,) for row in loadings),
            tuple(data["psi"]) if data.get("psi") is not None else None,
            int(data.get("N", DEFAULT_SAMPLE_SIZE)),
            str(data.get("name", "custom")),
        )


PRESETS: Dict[str, SimulationModel] = {
    "s1": SimulationModel(((0.9, 0), (0.8, 0), (0.7, 0), (0, 0.8), (0, 0.7)), name="s1"),
    "s2": SimulationModel(((0.5, 0), (0.5, 0), (0.5, 0.5), (0, 0.5), (0, 0.5)), name="s2"),
    "s3": SimulationModel(((0.9, 0), (0.8, 0), (0.6, 0.7), (0, 0.8), (0, 0.9)), name="s3"),
    "s1-p3": SimulationModel(((0.9,), (0.8,), (0.7,)), name="s1-p3"),
    "s2-p3": SimulationModel(((0.5,), (0.5,), (0.5,)), name="s2-p3"),
    "s3-p3": SimulationModel(((0.9,), (0.8,), (0.6,)), name="s3-p3"),
    "heywood-p3": SimulationModel(((0.995,), (0.6,), (0.5,)), name="heywood-p3"),
}


def load_model(spec: Union[str, Path], sample_size: Optional[int] = None) -> SimulationModel:
    """A preset name or a JSON file with ``L``, optional ``psi`` and ``N``."""

    key = str(spec).lower()
    if key in PRESETS:
        model = PRESETS[key]
    else:
        path = Path(spec)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"unknown model {spec!r}: not a preset ({', '.join(sorted(PRESETS))}) or readable JSON") from exc
        model = SimulationModel.from_dict(data)
    if sample_size is not None and sample_size != model.sample_size:
        model = SimulationModel(model.loadings, tuple(model.Psi), sample_size, model.name)
    return model


def run_generator(seed: int, run: int = 0) -> np.random.Generator:
    """PCG64 stream for run ``run``; streams of different runs are independent."""

    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(run,))))


def draw_samples(model: SimulationModel, rng: np.random.Generator) -> np.ndarray:
    """``N`` rows from ``N(0, LL' + Psi)`` via ziggurat normals and the Cholesky factor."""

    factor = np.linalg.cholesky(model.sigma)
    return rng.standard_normal((model.sample_size, model.p)) @ factor.T


def exact_covariance(S: np.ndarray, decimals: Optional[int] = DEFAULT_DECIMALS) -> List[List[Fraction]]:
    """Symmetric exact copy of ``S``, rounded half-to-even when ``decimals`` is given."""

    p = S.shape[0]
    rows: List[List[Fraction]] = [[Fraction(0)] * p for _ in range(p)]
    for i in range(p):
        for j in range(i, p):
            value = (float(S[i, j]) + float(S[j, i])) / 2.0
            exact = Fraction(value) if decimals is None else round_to_decimals(value, decimals)
            rows[i][j] = rows[j][i] = exact
    return rows


def simulate_covariance(
    model: SimulationModel,
    seed: int = 0,
    decimals: Optional[int] = DEFAULT_DECIMALS,
    *,
    run: int = 0,
    k: Optional[int] = None,
) -> FactorProblem:
    """Seeded sample covariance of ``model`` as an exact factor problem."""

    samples = draw_samples(model, run_generator(seed, run))
    S = exact_covariance(covariance_from_samples(samples), decimals)
    LOGGER.debug("Simulated %s run %d (seed %d)", model.name, run, seed)
    return FactorProblem(S, model.k if k is None else k, sample_size=model.sample_size)


def interpolate_covariance(S_a: Sequence[Sequence[Fraction]], S_b: Sequence[Sequence[Fraction]], t: Fraction) -> List[List[Fraction]]:
    """``t * S_a + (1 - t) * S_b``, exactly."""

    t = Fraction(t)
    if len(S_a) != len(S_b):
        raise DomainError("interpolated matrices must have the same size")
    return [[t * a + (1 - t) * b for a, b in zip(row_a, row_b)] for row_a, row_b in zip(S_a, S_b)]


__all__ = [
    "PRESETS",
    "SimulationModel",
    "draw_samples",
    "exact_covariance",
    "interpolate_covariance",
    "load_model",
    "run_generator",
    "simulate_covariance",
]

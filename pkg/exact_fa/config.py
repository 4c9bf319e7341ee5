"""Configuration management for exact_fa studies."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Literal, Optional

LOGGER = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "exact-fa.json"

DEFAULT_MAX_BASIS_SIZE = 5000
DEFAULT_MAX_DEGREE = 60
DEFAULT_MAX_REDUCTIONS = 50_000
DEFAULT_MAX_TERMS = 200_000
DEFAULT_MAX_SECONDS: Optional[float] = 600.0
DEFAULT_COMPLEXITY_THRESHOLD = 6
DEFAULT_ROOT_WIDTH = Fraction(1, 10**12)
DEFAULT_RESIDUAL_TOLERANCE = Fraction(1, 10**10)
DEFAULT_MAX_REFINEMENT_ROUNDS = 20
DEFAULT_SLICE_POINTS = 3
DEFAULT_SLICE_RETRIES = 12
DEFAULT_MAX_EXACT_VARIABLES = 4

DEFAULT_GRADIENT_TOLERANCE = 1e-9
DEFAULT_MAX_ITERATIONS = 500
DEFAULT_LAWLEY_FLOOR = 0.005
DEFAULT_STARTS = 100
DEFAULT_SAMPLE_SIZE = 100
DEFAULT_EQDIFF0_TOLERANCE = 1e-6
DEFAULT_PSI_TOLERANCE = 1e-6
DEFAULT_FISHER_TOLERANCE = 1e-6

DEFAULT_DECIMALS = 1
DEFAULT_RUNS = 100
DEFAULT_SEED = 0
DEFAULT_GRID = 11
DEFAULT_TRANSITION_STEPS = 8
DEFAULT_WORKERS = 1

Mode = Literal["solve-exact", "solve-numeric", "classify", "simulate", "interpolate"]
Algorithm = Literal["lawley", "jennrich", "em"]
ClassifyMode = Literal["exact", "numeric"]


def as_fraction(value: Any) -> Fraction:
    """Exact value of a config number; floats are read through their shortest repr."""

    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def _optional_float(value: Any) -> Optional[float]:
    return None if value is None else float(value)


@dataclass
class AlgebraSettings:
    """Budgets and precision targets of the exact path."""

    max_basis_size: int = DEFAULT_MAX_BASIS_SIZE
    max_degree: int = DEFAULT_MAX_DEGREE
    max_reductions: int = DEFAULT_MAX_REDUCTIONS
    max_terms: int = DEFAULT_MAX_TERMS
    max_seconds: Optional[float] = DEFAULT_MAX_SECONDS
    complexity_threshold: int = DEFAULT_COMPLEXITY_THRESHOLD
    root_width: float = float(DEFAULT_ROOT_WIDTH)
    residual_tolerance: float = float(DEFAULT_RESIDUAL_TOLERANCE)
    max_refinement_rounds: int = DEFAULT_MAX_REFINEMENT_ROUNDS
    slice_points: int = DEFAULT_SLICE_POINTS
    slice_retries: int = DEFAULT_SLICE_RETRIES
    max_exact_variables: int = DEFAULT_MAX_EXACT_VARIABLES
    allow_large: bool = False

    def budget(self) -> Dict[str, Any]:
        """Keyword budget for one branch of the Groebner computations; ``max_seconds`` None is unlimited."""

        return {
            "max_basis_size": self.max_basis_size,
            "max_degree": self.max_degree,
            "max_reductions": self.max_reductions,
            "max_terms": self.max_terms,
            "max_seconds": self.max_seconds,
        }


@dataclass
class FitSettings:
    """Numerical fitters and the pattern classifier."""

    algorithm: Algorithm = "jennrich"
    starts: int = DEFAULT_STARTS
    gradient_tolerance: float = DEFAULT_GRADIENT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    lawley_floor: float = DEFAULT_LAWLEY_FLOOR
    sample_size: int = DEFAULT_SAMPLE_SIZE
    eqdiff0_tolerance: float = DEFAULT_EQDIFF0_TOLERANCE
    psi_tolerance: float = DEFAULT_PSI_TOLERANCE
    fisher_tolerance: float = DEFAULT_FISHER_TOLERANCE


@dataclass
class SimulationSettings:
    """Data generation for Monte-Carlo runs."""

    model: str = "s3-p3"
    runs: int = DEFAULT_RUNS
    sample_size: int = DEFAULT_SAMPLE_SIZE
    exact_decimals: Optional[int] = DEFAULT_DECIMALS
    numeric_decimals: Optional[int] = None


@dataclass
class StudySettings:
    """Covariance interpolation study."""

    grid: int = DEFAULT_GRID
    transition_steps: int = DEFAULT_TRANSITION_STEPS
    classify_mode: ClassifyMode = "numeric"
    profile_index: Optional[int] = None
    profile_points: int = 21


@dataclass
class StudyConfig:
    """Everything needed to reproduce a run; echoed into every JSON report."""

    mode: Mode = "classify"
    factors: int = 1
    ridge: str = "0"
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    output: Optional[str] = None
    algebra: AlgebraSettings = field(default_factory=AlgebraSettings)
    fit: FitSettings = field(default_factory=FitSettings)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    study: StudySettings = field(default_factory=StudySettings)

    @staticmethod
    def default() -> "StudyConfig":
        return StudyConfig()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> "StudyConfig":
        algebra_data: Dict[str, Any] = data.get("algebra", {})
        fit_data: Dict[str, Any] = data.get("fit", {})
        simulation_data: Dict[str, Any] = data.get("simulation", {})
        study_data: Dict[str, Any] = data.get("study", {})

        algebra = AlgebraSettings(
            max_basis_size=int(algebra_data.get("max_basis_size", DEFAULT_MAX_BASIS_SIZE)),
            max_degree=int(algebra_data.get("max_degree", DEFAULT_MAX_DEGREE)),
            max_reductions=int(algebra_data.get("max_reductions", DEFAULT_MAX_REDUCTIONS)),
            max_terms=int(algebra_data.get("max_terms", DEFAULT_MAX_TERMS)),
            max_seconds=_optional_float(algebra_data.get("max_seconds", DEFAULT_MAX_SECONDS)),
            complexity_threshold=int(algebra_data.get("complexity_threshold", DEFAULT_COMPLEXITY_THRESHOLD)),
            root_width=float(algebra_data.get("root_width", DEFAULT_ROOT_WIDTH)),
            residual_tolerance=float(algebra_data.get("residual_tolerance", DEFAULT_RESIDUAL_TOLERANCE)),
            max_refinement_rounds=int(algebra_data.get("max_refinement_rounds", DEFAULT_MAX_REFINEMENT_ROUNDS)),
            slice_points=int(algebra_data.get("slice_points", DEFAULT_SLICE_POINTS)),
            slice_retries=int(algebra_data.get("slice_retries", DEFAULT_SLICE_RETRIES)),
            max_exact_variables=int(algebra_data.get("max_exact_variables", DEFAULT_MAX_EXACT_VARIABLES)),
            allow_large=bool(algebra_data.get("allow_large", False)),
        )
        fit = FitSettings(
            algorithm=fit_data.get("algorithm", "jennrich"),
            starts=int(fit_data.get("starts", DEFAULT_STARTS)),
            gradient_tolerance=float(fit_data.get("gradient_tolerance", DEFAULT_GRADIENT_TOLERANCE)),
            max_iterations=int(fit_data.get("max_iterations", DEFAULT_MAX_ITERATIONS)),
            lawley_floor=float(fit_data.get("lawley_floor", DEFAULT_LAWLEY_FLOOR)),
            sample_size=int(fit_data.get("sample_size", DEFAULT_SAMPLE_SIZE)),
            eqdiff0_tolerance=float(fit_data.get("eqdiff0_tolerance", DEFAULT_EQDIFF0_TOLERANCE)),
            psi_tolerance=float(fit_data.get("psi_tolerance", DEFAULT_PSI_TOLERANCE)),
            fisher_tolerance=float(fit_data.get("fisher_tolerance", DEFAULT_FISHER_TOLERANCE)),
        )
        simulation = SimulationSettings(
            model=simulation_data.get("model", "s3-p3"),
            runs=int(simulation_data.get("runs", DEFAULT_RUNS)),
            sample_size=int(simulation_data.get("sample_size", DEFAULT_SAMPLE_SIZE)),
            exact_decimals=simulation_data.get("exact_decimals", DEFAULT_DECIMALS),
            numeric_decimals=simulation_data.get("numeric_decimals"),
        )
        study = StudySettings(
            grid=int(study_data.get("grid", DEFAULT_GRID)),
            transition_steps=int(study_data.get("transition_steps", DEFAULT_TRANSITION_STEPS)),
            classify_mode=study_data.get("classify_mode", "numeric"),
            profile_index=study_data.get("profile_index"),
            profile_points=int(study_data.get("profile_points", 21)),
        )
        return StudyConfig(
            mode=data.get("mode", "classify"),
            factors=int(data.get("factors", 1)),
            ridge=str(data.get("ridge", "0")),
            seed=int(data.get("seed", DEFAULT_SEED)),
            workers=int(data.get("workers", DEFAULT_WORKERS)),
            output=data.get("output"),
            algebra=algebra,
            fit=fit,
            simulation=simulation,
            study=study,
        )


class ConfigManager:
    """Utility for loading and saving study configurations."""

    def __init__(self, path: Optional[os.PathLike[str]] = None) -> None:
        self._path = Path(path) if path else self._default_path()
        self.config = StudyConfig.default()
        self.load()

    @staticmethod
    def _default_path() -> Path:
        config_home = Path(os.environ.get("EXACT_FA_HOME") or Path.home())
        return config_home / DEFAULT_CONFIG_NAME

    @property
    def path(self) -> Path:
        return self._path

    def load(self) -> None:
        if not self._path.exists():
            return
        try:
            with self._path.open("r", encoding="utf-8") as handle:
                data: Dict[str, Any] = json.load(handle)
        except (OSError, json.JSONDecodeError):
            LOGGER.warning("Could not read %s; using default settings", self._path)
            return

        self.config = StudyConfig.from_dict(data)

    def save(self) -> None:
        try:
            with self._path.open("w", encoding="utf-8") as handle:
                json.dump(self.config.to_dict(), handle, indent=2)
        except OSError:
            # Not fatal: the run continues with the in-memory configuration.
            LOGGER.warning("Could not write %s", self._path)


__all__ = [
    "AlgebraSettings",
    "ConfigManager",
    "FitSettings",
    "SimulationSettings",
    "StudyConfig",
    "StudySettings",
    "as_fraction",
]

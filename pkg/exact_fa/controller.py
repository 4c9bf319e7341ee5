"""Core controller that coordinates configuration, solvers and output."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .classify.evaluate import eqdiff0_residual
from .classify.fitters import best_fit, fit_multistart
from .config import ConfigManager, StudyConfig, as_fraction
from .faml.problem import FactorProblem
from .faml.solutions import collapse_sign_classes, enumerate_solutions, format_solution
from .harness.io import read_covariance, write_json, write_table
from .harness.simulate import load_model
from .harness.study import (
    PROFILE_FIELDS,
    RUN_FIELDS,
    STUDY_FIELDS,
    TABLE_FIELDS,
    classify_matrix,
    grid_points,
    interpolate_study,
    monte_carlo,
    require_desk_scale,
)
from .pool import WorkerPool

LOGGER = logging.getLogger(__name__)

MODES = ("solve-exact", "solve-numeric", "classify", "simulate", "interpolate")


class StudyController:
    """Runs one study mode with the current configuration."""

    def __init__(self, config_manager: ConfigManager) -> None:
        self._config_manager = config_manager
        self.config: StudyConfig = config_manager.config
        self.mode: str = self.config.mode
        self.pool = WorkerPool(self.config.workers)

    # ------------------------------------------------------------------
    # Configuration persistence
    # ------------------------------------------------------------------
    def save_config(self) -> None:
        self._config_manager.config = self.config
        self._config_manager.save()

    def apply_config(self, config: StudyConfig) -> None:
        """Replace the current configuration with ``config`` and persist it."""

        self.config = config
        self.mode = config.mode
        if self.pool.workers != config.workers:
            self.pool = WorkerPool(config.workers)
        self.save_config()

    # ------------------------------------------------------------------
    # Mode control
    # ------------------------------------------------------------------
    def set_mode(self, mode: str) -> None:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        self.mode = mode
        self.config.mode = mode  # type: ignore[assignment]

    def run(self, **inputs: Any) -> Dict[str, Any]:
        """Dispatch to the handler of the current mode."""

        handlers = {
            "solve-exact": lambda: self.solve_exact(inputs["cov"]),
            "solve-numeric": lambda: self.solve_numeric(inputs["cov"]),
            "classify": lambda: self.classify(inputs["cov"]),
            "simulate": lambda: self.simulate(inputs.get("model")),
            "interpolate": lambda: self.interpolate(inputs["cov_a"], inputs["cov_b"]),
        }
        LOGGER.info("Running %s", self.mode)
        return handlers[self.mode]()

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------
    def load_problem(self, path: str) -> FactorProblem:
        S = read_covariance(path)
        return FactorProblem(S, self.config.factors, as_fraction(self.config.ridge), self.config.fit.sample_size)

    def _envelope(self, body: Dict[str, Any]) -> Dict[str, Any]:
        return {"mode": self.mode, **body, "config": self.config.to_dict()}

    def _output(self) -> Optional[Path]:
        return Path(self.config.output) if self.config.output else None

    def _emit(self, report: Dict[str, Any], tables: Sequence[tuple] = ()) -> Dict[str, Any]:
        """JSON report, or CSV tables when the output path ends in ``.csv``."""

        output = self._output()
        if output is not None and output.suffix.lower() == ".csv" and tables:
            for suffix, rows, fields in tables:
                if suffix and not rows:
                    continue
                target = output if not suffix else output.with_name(f"{output.stem}-{suffix}.csv")
                write_table(rows, target, fields)
        else:
            write_json(report, output)
        return report

    # ------------------------------------------------------------------
    # Modes
    # ------------------------------------------------------------------
    def solve_exact(self, cov: str) -> Dict[str, Any]:
        prob = self.load_problem(cov)
        require_desk_scale(prob.p, prob.k, self.config.algebra)
        solutions = enumerate_solutions(prob, self.config.algebra, seed=self.config.seed, pool=self.pool)
        for solution in solutions:
            LOGGER.info("%s", format_solution(solution))
        body = solutions.to_dict()
        body["count"] = len(solutions)
        body["sign_classes"] = len(collapse_sign_classes(list(solutions)))
        body["variables"] = list(prob.loading_names())
        return self._emit(self._envelope(body))

    def solve_numeric(self, cov: str) -> Dict[str, Any]:
        prob = self.load_problem(cov)
        S = prob.as_array()
        results = fit_multistart(S, prob.k, self.config.fit, seed=self.config.seed, pool=self.pool)
        best = best_fit(results)
        limits = sorted({round(result.discrepancy, 6) for result in results if np.isfinite(result.discrepancy)})
        body: Dict[str, Any] = {
            "algorithm": self.config.fit.algorithm,
            "starts": self.config.fit.starts,
            "fitted": len(results),
            "converged": sum(result.converged for result in results),
            "limits": limits,
            "best": None,
        }
        if best is not None:
            body["best"] = best.to_dict()
            body["best"]["residual"] = eqdiff0_residual(S, best.L, best.Psi)
        rows: List[Dict[str, Any]] = [
            {"start": index, "discrepancy": result.discrepancy, "converged": result.converged, "psi": " ".join(f"{value:.8g}" for value in result.Psi)}
            for index, result in enumerate(results)
        ]
        return self._emit(self._envelope(body), [("", rows, ("start", "discrepancy", "converged", "psi"))])

    def classify(self, cov: str) -> Dict[str, Any]:
        S = read_covariance(cov)
        report = classify_matrix(
            S,
            self.config.factors,
            self.config.study.classify_mode,
            fit=self.config.fit,
            algebra=self.config.algebra,
            seed=self.config.seed,
            ridge=as_fraction(self.config.ridge),
            pool=self.pool,
        )
        return self._emit(self._envelope(report.to_dict()))

    def simulate(self, model: Optional[str] = None) -> Dict[str, Any]:
        settings = self.config.simulation
        simulation_model = load_model(model or settings.model, settings.sample_size)
        mode = self.config.study.classify_mode
        decimals = settings.exact_decimals if mode == "exact" else settings.numeric_decimals
        result = monte_carlo(
            simulation_model,
            settings.runs,
            mode,
            seed=self.config.seed,
            decimals=decimals,
            fit=self.config.fit,
            algebra=self.config.algebra,
            pool=self.pool,
        )
        body = {"model": simulation_model.to_dict(), **result.to_dict()}
        return self._emit(self._envelope(body), [("", result.table(), TABLE_FIELDS), ("runs", result.rows, RUN_FIELDS)])

    def interpolate(self, cov_a: str, cov_b: str) -> Dict[str, Any]:
        study = self.config.study
        S_a, S_b = read_covariance(cov_a), read_covariance(cov_b)
        # both endpoints must be valid problems
        for S in (S_a, S_b):
            FactorProblem(S, self.config.factors)
        result = interpolate_study(
            S_a,
            S_b,
            grid_points(study.grid),
            self.config.factors,
            mode=study.classify_mode,
            fit=self.config.fit,
            algebra=self.config.algebra,
            seed=self.config.seed,
            transition_steps=study.transition_steps,
            profile_index=study.profile_index,
            profile_points=study.profile_points,
            pool=self.pool,
        )
        body = result.to_dict()
        body["profiles"] = result.profiles
        return self._emit(
            self._envelope(body),
            [("", result.rows, STUDY_FIELDS), ("profile", result.profiles, PROFILE_FIELDS)],
        )


__all__ = ["MODES", "StudyController"]

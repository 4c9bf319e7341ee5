"""Simulation, covariance I/O and study drivers."""

from .io import covariance_from_samples, read_covariance, write_covariance, write_json, write_table
from .simulate import PRESETS, SimulationModel, load_model, simulate_covariance
from .study import InterpolationResult, MonteCarloResult, interpolate_study, monte_carlo

__all__ = [
    "InterpolationResult",
    "MonteCarloResult",
    "PRESETS",
    "SimulationModel",
    "covariance_from_samples",
    "interpolate_study",
    "load_model",
    "monte_carlo",
    "read_covariance",
    "simulate_covariance",
    "write_covariance",
    "write_json",
    "write_table",
]

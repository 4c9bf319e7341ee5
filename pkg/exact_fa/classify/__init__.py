"""Evaluating, fitting and classifying factor-analysis solutions."""

from .evaluate import FisherInformation, discrepancy, eqdiff0_residual, observed_fisher
from .fitters import FitResult, best_fit, fit, fit_em, fit_jennrich, fit_lawley, fit_multistart, psi_profile
from .linalg import rotate_lower_triangular, symmetric_eigen
from .pattern import PATTERNS, SolutionReport, classify_exact, classify_numeric, classify_pattern

__all__ = [
    "FisherInformation",
    "FitResult",
    "PATTERNS",
    "SolutionReport",
    "best_fit",
    "classify_exact",
    "classify_numeric",
    "classify_pattern",
    "discrepancy",
    "eqdiff0_residual",
    "fit",
    "fit_em",
    "fit_jennrich",
    "fit_lawley",
    "fit_multistart",
    "observed_fisher",
    "psi_profile",
    "rotate_lower_triangular",
    "symmetric_eigen",
]

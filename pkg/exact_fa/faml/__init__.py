"""Maximum-likelihood factor analysis as a polynomial system."""

from .decompose import DecompositionNode, decompose, decompose_ideal, problem_splitters
from .ideal import build_joint_ideal, build_likelihood_ideal, extra_splitters, psi_polynomials
from .problem import FactorProblem, rational_matrix_inverse
from .solutions import (
    CandidateSolution,
    SolutionSet,
    canonicalize_sign,
    collapse_sign_classes,
    enumerate_solutions,
    format_solution,
    likelihood_residual,
    recover_psi,
)

__all__ = [
    "CandidateSolution",
    "DecompositionNode",
    "FactorProblem",
    "SolutionSet",
    "build_joint_ideal",
    "build_likelihood_ideal",
    "canonicalize_sign",
    "collapse_sign_classes",
    "decompose",
    "decompose_ideal",
    "enumerate_solutions",
    "extra_splitters",
    "format_solution",
    "likelihood_residual",
    "problem_splitters",
    "psi_polynomials",
    "rational_matrix_inverse",
    "recover_psi",
]

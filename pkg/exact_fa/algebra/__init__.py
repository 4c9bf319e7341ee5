"""Exact polynomial algebra: rings, Groebner bases and real solving."""

from .groebner import (
    GroebnerBasis,
    Ideal,
    buchberger,
    fglm,
    ideal_contains,
    ideal_sum,
    is_zero_dimensional,
    radical_basis,
    saturate,
    univariate_eliminant,
    zero_dim_radical,
)
from .intervals import Interval
from .polyring import GREVLEX, LEX, MonomialOrder, Ordering, Polynomial, PolynomialRing, monomial_cmp, normal_form
from .realsolve import IsolatingInterval, RealPoint, isolate_real_roots, slice_positive_dimensional, solve_triangular

__all__ = [
    "GREVLEX",
    "GroebnerBasis",
    "Ideal",
    "Interval",
    "IsolatingInterval",
    "LEX",
    "MonomialOrder",
    "Ordering",
    "Polynomial",
    "PolynomialRing",
    "RealPoint",
    "buchberger",
    "fglm",
    "ideal_contains",
    "ideal_sum",
    "is_zero_dimensional",
    "isolate_real_roots",
    "monomial_cmp",
    "normal_form",
    "radical_basis",
    "saturate",
    "slice_positive_dimensional",
    "solve_triangular",
    "univariate_eliminant",
    "zero_dim_radical",
]

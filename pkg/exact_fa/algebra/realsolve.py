"""Real points of zero-dimensional ideals: Sturm isolation and certified back-substitution."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import (
    DEFAULT_MAX_REFINEMENT_ROUNDS,
    DEFAULT_RESIDUAL_TOLERANCE,
    DEFAULT_ROOT_WIDTH,
    DEFAULT_SLICE_RETRIES,
)
from ..errors import DomainError, EmptySample, PrecisionFailure
from ..utils.rationals import simplest_rational, to_decimal_string
from . import univariate
from .groebner import (
    GroebnerBasis,
    Ideal,
    branch_budget,
    buchberger,
    fglm,
    ideal_sum,
    is_zero_dimensional,
    radical_basis,
    univariate_eliminant,
)
from .intervals import Interval
from .polyring import GREVLEX, LEX, Polynomial

LOGGER = logging.getLogger(__name__)

INITIAL_BITS = 16
MAX_REFINEMENT_BITS = 4096


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class IsolatingInterval:
    """Exactly one root of the square-free ``polynomial`` lies in ``[lower, upper]``.

    Either ``lower == upper`` (a certified rational root) or neither endpoint is a root.
    """

    lower: Fraction
    upper: Fraction
    polynomial: Tuple[Fraction, ...]

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def interval(self) -> Interval:
        return Interval(self.lower, self.upper)

    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    def bisect(self) -> "IsolatingInterval":
        if self.is_exact:
            return self
        middle = (self.lower + self.upper) / 2
        at_middle = _sign(univariate.evaluate(self.polynomial, middle))  # type: ignore[arg-type]
        if at_middle == 0:
            return replace(self, lower=middle, upper=middle)
        at_lower = _sign(univariate.evaluate(self.polynomial, self.lower))  # type: ignore[arg-type]
        if at_middle == at_lower:
            return replace(self, lower=middle)
        return replace(self, upper=middle)

    def refine(self, width: Fraction) -> "IsolatingInterval":
        current = self
        while not current.is_exact and current.width > width:
            current = current.bisect()
        return current


def _split_point(coeffs: Sequence[Fraction], lower: Fraction, upper: Fraction) -> Fraction:
    for numerator, denominator in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (4, 5)):
        point = lower + (upper - lower) * numerator / denominator
        if univariate.evaluate(coeffs, point):
            return point
    step = 6
    while True:
        point = lower + (upper - lower) / step
        if univariate.evaluate(coeffs, point):
            return point
        step += 1


def isolate_real_roots(
    f: Union[Polynomial, Sequence[Fraction]],
    *,
    width: Optional[Fraction] = None,
) -> List[IsolatingInterval]:
    """One isolating interval per distinct real root, in increasing order.

    Rational roots are returned as degenerate intervals.  When ``width`` is given the
    remaining intervals are refined below it.
    """

    coeffs = univariate.to_coefficients(f) if isinstance(f, Polynomial) else univariate.trim(f)
    if not coeffs:
        raise DomainError("the zero polynomial has no isolated roots")
    squarefree = univariate.squarefree_part(coeffs)
    if len(squarefree) == 1:
        return []
    sequence = univariate.sturm_sequence(squarefree)
    bound = univariate.cauchy_bound(squarefree)
    polynomial = tuple(squarefree)

    def variations(x: Fraction) -> int:
        return univariate.sign_variations(sequence, x)

    found: List[IsolatingInterval] = []
    stack = [(-bound, bound, variations(-bound), variations(bound))]
    while stack:
        lower, upper, v_lower, v_upper = stack.pop()
        count = v_lower - v_upper
        if count == 0:
            continue
        if count == 1:
            found.append(IsolatingInterval(lower, upper, polynomial))
            continue
        middle = _split_point(squarefree, lower, upper)
        v_middle = variations(middle)
        stack.append((lower, middle, v_lower, v_middle))
        stack.append((middle, upper, v_middle, v_upper))

    lead = univariate.primitive_integer_form(squarefree)[-1]
    separation = Fraction(1, lead * lead + 1)
    certified = []
    for item in found:
        item = item.refine(separation)
        if not item.is_exact:
            candidate = simplest_rational(item.lower, item.upper)
            if not univariate.evaluate(squarefree, candidate):
                item = replace(item, lower=candidate, upper=candidate)
        if width is not None:
            item = item.refine(width)
        certified.append(item)
    certified.sort(key=lambda item: item.lower)
    LOGGER.debug("Isolated %d real roots of a degree %d polynomial", len(certified), len(squarefree) - 1)
    return certified


@dataclass(frozen=True)
class RealPoint:
    """A real solution; exact coordinates are degenerate intervals."""

    coordinates: Tuple[Interval, ...]
    residual_bound: Fraction
    sample_only: bool = False
    sources: Tuple[IsolatingInterval, ...] = field(default=(), compare=False, repr=False)

    def refine(self, width: Fraction) -> "RealPoint":
        """Shrink every coordinate below ``width``; points without sources are returned as is."""

        if not self.sources:
            return self
        sources = tuple(source.refine(width) for source in self.sources)
        return replace(self, coordinates=tuple(source.interval() for source in sources), sources=sources)

    @property
    def exact(self) -> bool:
        return all(coordinate.is_point for coordinate in self.coordinates)

    def rational(self) -> Optional[Tuple[Fraction, ...]]:
        if not self.exact:
            return None
        return tuple(coordinate.lower for coordinate in self.coordinates)

    def values(self) -> Tuple[float, ...]:
        return tuple(float(coordinate.midpoint) for coordinate in self.coordinates)

    def to_dict(self, names: Optional[Sequence[str]] = None, digits: int = 17) -> Dict[str, object]:
        names = list(names) if names is not None else [f"z{index + 1}" for index in range(len(self.coordinates))]
        return {
            "coordinates": {
                name: to_decimal_string(coordinate.midpoint, digits) for name, coordinate in zip(names, self.coordinates)
            },
            "exact": {
                name: (f"{coordinate.lower}" if coordinate.is_point else None)
                for name, coordinate in zip(names, self.coordinates)
            },
            "residual_bound": to_decimal_string(self.residual_bound, 6),
            "sample_only": self.sample_only,
        }


@dataclass
class _Candidate:
    roots: Dict[int, IsolatingInterval] = field(default_factory=dict)

    def box(self, nvars: int) -> List[Interval]:
        return [self.roots[index].interval() if index in self.roots else Interval.point(0) for index in range(nvars)]


def _enclosure(poly: Polynomial, box: Sequence[Interval]) -> Interval:
    value = poly.evaluate(box)
    if isinstance(value, Interval):
        return value
    return Interval.point(value)  # type: ignore[arg-type]


def _decide(
    candidate: _Candidate,
    generators: Sequence[Polynomial],
    nvars: int,
    tolerance: Fraction,
    max_rounds: int,
) -> Optional[_Candidate]:
    """Refine until every enclosure is tight around zero (keep) or one excludes zero (drop).

    Dropping is certified: an enclosure that excludes zero proves the generator does not
    vanish.  Keeping is tolerance-based for irrational coordinates: the point is accepted once
    every enclosure contains zero and is narrower than ``tolerance``.  Exact (rational)
    coordinates give degenerate enclosures, so for them keeping is exact as well.
    Precision doubles from ``INITIAL_BITS`` per round up to ``MAX_REFINEMENT_BITS``.
    """

    stuck: Optional[Polynomial] = None
    bits = 0
    rounds = 0
    for round_index in range(max_rounds + 1):
        rounds = round_index
        box = candidate.box(nvars)
        stuck = None
        for poly in generators:
            enclosure = _enclosure(poly, box)
            if not enclosure.contains_zero():
                return None
            if enclosure.width >= tolerance and stuck is None:
                stuck = poly
        if stuck is None:
            return candidate
        next_bits = min(INITIAL_BITS << round_index, MAX_REFINEMENT_BITS)
        if round_index == max_rounds or next_bits == bits:
            break
        bits = next_bits
        step = Fraction(1, 2**bits)
        LOGGER.debug("Refining candidate to %d bits", bits)
        candidate = _Candidate({index: root.refine(step) for index, root in candidate.roots.items()})
    raise PrecisionFailure(repr(stuck), rounds)


def solve_triangular(
    basis: GroebnerBasis,
    *,
    width: Fraction = DEFAULT_ROOT_WIDTH,
    tolerance: Fraction = DEFAULT_RESIDUAL_TOLERANCE,
    max_rounds: int = DEFAULT_MAX_REFINEMENT_ROUNDS,
) -> List[RealPoint]:
    """Every real solution of a zero-dimensional radical basis.

    Variables are solved from the lowest ranked upward; a partial assignment survives a
    level only if all basis elements in the assigned variables can vanish on it.
    """

    if not is_zero_dimensional(basis):
        raise DomainError("solve_triangular requires a zero-dimensional basis")
    if basis.is_unit:
        return []
    nvars = basis.nvars
    width = Fraction(width)
    tolerance = Fraction(tolerance)
    levels = list(reversed(basis.order.variable_ranking(nvars)))

    partial: List[_Candidate] = [_Candidate()]
    assigned: set = set()
    for var in levels:
        roots = isolate_real_roots(univariate_eliminant(basis, var))
        assigned.add(var)
        generators = [
            poly for poly in basis.elements if var in poly.variables() and set(poly.variables()) <= assigned
        ]
        survivors: List[_Candidate] = []
        for candidate in partial:
            for root in roots:
                extended = _Candidate({**candidate.roots, var: root})
                kept = _decide(extended, generators, nvars, tolerance, max_rounds)
                if kept is not None:
                    survivors.append(kept)
        LOGGER.debug("Level %d: %d roots, %d partial solutions survive", var, len(roots), len(survivors))
        partial = survivors
        if not partial:
            return []

    points = []
    for candidate in partial:
        sources = tuple(candidate.roots[index].refine(width) for index in range(nvars))
        refined = [source.interval() for source in sources]
        residual = max((_enclosure(poly, refined).magnitude() for poly in basis.elements), default=Fraction(0))
        points.append(RealPoint(tuple(refined), residual, sources=sources))
    points.sort(key=lambda point: tuple(point.values()))
    return points


def _random_hyperplane(nvars: int, rng: np.random.Generator) -> Polynomial:
    coefficients = rng.integers(-9, 10, size=nvars)
    while not coefficients.any():
        coefficients = rng.integers(-9, 10, size=nvars)
    constant = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
    terms = {}
    for index, value in enumerate(coefficients):
        if value:
            exponents = [0] * nvars
            exponents[index] = 1
            terms[tuple(exponents)] = int(value)
    terms[(0,) * nvars] = -constant
    return Polynomial(nvars, terms)


def slice_positive_dimensional(
    basis: GroebnerBasis,
    count: int,
    seed: int,
    *,
    retries: int = DEFAULT_SLICE_RETRIES,
    tolerance: Fraction = DEFAULT_RESIDUAL_TOLERANCE,
    **budget: Any,
) -> List[RealPoint]:
    """Sample points of a positive-dimensional variety by cutting it with random hyperplanes.

    Components can be missed; every returned point is flagged ``sample_only``.  One
    deadline from ``budget`` covers all slices.
    """

    if is_zero_dimensional(basis):
        raise DomainError("slicing requires a positive-dimensional ideal (unit and finite ideals are zero-dimensional)")
    budget = branch_budget(budget)
    nvars = basis.nvars
    rng = np.random.default_rng(seed)
    points: List[RealPoint] = []
    attempts = 0
    while len(points) < count and attempts < retries:
        attempts += 1
        ideal: Ideal = basis.ideal()
        sliced = basis
        for _ in range(nvars):
            ideal = ideal_sum(ideal, Ideal(nvars, (_random_hyperplane(nvars, rng),)))
            sliced = buchberger(ideal, GREVLEX, **budget)
            if sliced.is_unit or is_zero_dimensional(sliced):
                break
        if sliced.is_unit or not is_zero_dimensional(sliced):
            LOGGER.debug("Slice %d was inconsistent", attempts)
            continue
        lex_basis = fglm(radical_basis(sliced, **budget), LEX, **budget)
        for point in solve_triangular(lex_basis, tolerance=tolerance):
            box = list(point.coordinates)
            residual = max((_enclosure(poly, box).magnitude() for poly in basis.elements), default=Fraction(0))
            if residual >= tolerance:
                continue
            points.append(replace(point, residual_bound=residual, sample_only=True))
            if len(points) >= count:
                break
    if not points:
        raise EmptySample(f"no real point found on {attempts} random slices")
    LOGGER.info("Sampled %d points from a positive-dimensional component in %d slices", len(points), attempts)
    return points


__all__ = [
    "IsolatingInterval",
    "RealPoint",
    "isolate_real_roots",
    "slice_positive_dimensional",
    "solve_triangular",
]

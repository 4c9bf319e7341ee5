"""Groebner bases and the ideal operations used by the decomposition tree."""

from __future__ import annotations

import heapq
import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from ..config import (
    DEFAULT_MAX_BASIS_SIZE,
    DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_REDUCTIONS,
    DEFAULT_MAX_SECONDS,
    DEFAULT_MAX_TERMS,
)
from ..errors import DomainError, ResourceExceeded, StructuralError
from . import univariate
from .polyring import (
    GREVLEX,
    LEX,
    Monomial,
    MonomialOrder,
    Polynomial,
    monomial_divides,
    monomial_lcm,
    monomial_product,
    monomial_quotient,
    normal_form,
    pure_power_variable,
)

LOGGER = logging.getLogger(__name__)


def deadline_after(max_seconds: Optional[float], deadline: Optional[float] = None) -> Optional[float]:
    """Earliest of ``deadline`` and ``max_seconds`` from now (``time.monotonic`` scale)."""

    if max_seconds is None:
        return deadline
    own = time.monotonic() + max_seconds
    return own if deadline is None else min(own, deadline)


@dataclass
class _Meter:
    """Reduction count, working-polynomial size and deadline of one Groebner computation."""

    stage: str
    order: MonomialOrder
    max_reductions: int = DEFAULT_MAX_REDUCTIONS
    max_terms: int = DEFAULT_MAX_TERMS
    deadline: Optional[float] = None
    started: float = field(default_factory=time.monotonic)
    reductions: int = 0

    def exceeded(self, what: str, **state: Any) -> ResourceExceeded:
        diagnostics: Dict[str, Any] = {
            "stage": self.stage,
            "order": self.order.tag(),
            "reductions": self.reductions,
            "seconds": round(time.monotonic() - self.started, 3),
        }
        diagnostics.update(state)
        return ResourceExceeded(f"{what} budget exhausted", diagnostics)

    def check(self, terms: int = 0) -> None:
        if terms > self.max_terms:
            raise self.exceeded("Term count", terms=terms, max_terms=self.max_terms)
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise self.exceeded("Wall-clock")

    def count(self) -> None:
        if self.reductions >= self.max_reductions:
            raise self.exceeded("Reduction", max_reductions=self.max_reductions)
        self.reductions += 1


def _meter(
    stage: str,
    order: MonomialOrder,
    *,
    max_reductions: int = DEFAULT_MAX_REDUCTIONS,
    max_terms: int = DEFAULT_MAX_TERMS,
    max_seconds: Optional[float] = DEFAULT_MAX_SECONDS,
    deadline: Optional[float] = None,
    **_: Any,
) -> _Meter:
    # size and degree limits are enforced by buchberger itself
    return _Meter(stage, order, max_reductions, max_terms, deadline_after(max_seconds, deadline))



@dataclass(frozen=True)
class Ideal:
    """Generators of an ideal; zero generators are dropped on construction."""

    nvars: int
    generators: Tuple[Polynomial, ...] = ()

    def __post_init__(self) -> None:
        kept = []
        for poly in self.generators:
            if poly.nvars != self.nvars:
                raise StructuralError(f"generator of arity {poly.nvars} in an ideal of arity {self.nvars}")
            if not poly.is_zero():
                kept.append(poly)
        object.__setattr__(self, "generators", tuple(kept))

    @classmethod
    def of(cls, generators: Iterable[Polynomial], nvars: Optional[int] = None) -> "Ideal":
        gens = tuple(generators)
        if nvars is None:
            if not gens:
                raise DomainError("cannot infer the ring arity of an empty generator list")
            nvars = gens[0].nvars
        return cls(nvars, gens)

    @classmethod
    def unit(cls, nvars: int) -> "Ideal":
        return cls(nvars, (Polynomial.constant(nvars, 1),))

    def is_obviously_unit(self) -> bool:
        return any(poly.is_constant() for poly in self.generators)

    def __len__(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """A (normally reduced) Groebner basis, elements sorted by decreasing leading monomial."""

    order: MonomialOrder
    elements: Tuple[Polynomial, ...]
    nvars: int
    reduced: bool = True
    zero_dimensional: Optional[bool] = field(default=None, compare=False)

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def leading_monomials(self) -> List[Monomial]:
        return [poly.leading_monomial(self.order) for poly in self.elements]

    def reduce(self, poly: Polynomial, check: Optional[Callable[[int], None]] = None) -> Polynomial:
        return normal_form(poly, self.elements, self.order, check)

    def contains(self, poly: Polynomial) -> bool:
        return self.reduce(poly).is_zero()

    def ideal(self) -> Ideal:
        return Ideal(self.nvars, self.elements)

    def max_leading_degree(self) -> int:
        return max((sum(monomial) for monomial in self.leading_monomials()), default=0)

    def standard_monomials(self) -> List[Monomial]:
        """Monomials outside the leading ideal; finite only for zero-dimensional bases."""

        if not is_zero_dimensional(self):
            raise DomainError("standard monomials are infinite for a positive-dimensional ideal")
        if self.is_unit:
            return []
        leads = self.leading_monomials()
        bounds = [0] * self.nvars
        for lead in leads:
            var = pure_power_variable(lead)
            if var is not None:
                bound = lead[var]
                bounds[var] = bound if not bounds[var] else min(bounds[var], bound)
        result = []
        for monomial in itertools.product(*(range(bound) for bound in bounds)):
            if not any(monomial_divides(lead, monomial) for lead in leads):
                result.append(tuple(monomial))
        return sorted(result, key=self.order.key)


def _unit_basis(nvars: int, order: MonomialOrder) -> GroebnerBasis:
    return GroebnerBasis(order, (Polynomial.constant(nvars, 1),), nvars, True, True)


def _s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    lm_f, lc_f = f.leading_term(order)
    lm_g, lc_g = g.leading_term(order)
    lcm = monomial_lcm(lm_f, lm_g)
    return f.shift(monomial_quotient(lcm, lm_f), 1 / lc_f) - g.shift(monomial_quotient(lcm, lm_g), 1 / lc_g)


def branch_budget(budget: Mapping[str, Any]) -> Dict[str, Any]:
    """Fix the deadline of ``budget`` now so that every computation of a branch shares it."""

    fixed = dict(budget)
    fixed["deadline"] = deadline_after(fixed.pop("max_seconds", DEFAULT_MAX_SECONDS), fixed.get("deadline"))
    fixed["max_seconds"] = None
    return fixed


def reduce_basis(
    polys: Sequence[Polynomial],
    order: MonomialOrder,
    nvars: int,
    check: Optional[Callable[[int], None]] = None,
) -> GroebnerBasis:
    """Minimalize and interreduce a Groebner basis; the result is canonical."""

    monic = [poly.monic(order) for poly in polys if not poly.is_zero()]
    if any(poly.is_constant() for poly in monic):
        return _unit_basis(nvars, order)
    monic.sort(key=lambda poly: order.key(poly.leading_monomial(order)))
    minimal: List[Polynomial] = []
    for poly in monic:
        lead = poly.leading_monomial(order)
        if not any(monomial_divides(other.leading_monomial(order), lead) for other in minimal):
            minimal.append(poly)
    reduced: List[Polynomial] = []
    for index, poly in enumerate(minimal):
        others = minimal[:index] + minimal[index + 1 :]
        lead, coefficient = poly.leading_term(order)
        tail = poly - Polynomial._trusted(nvars, {lead: coefficient})
        tail = normal_form(tail, others, order, check) if others else tail
        reduced.append(tail + Polynomial._trusted(nvars, {lead: Fraction(1)}))
    reduced.sort(key=lambda poly: order.key(poly.leading_monomial(order)), reverse=True)
    basis = GroebnerBasis(order, tuple(reduced), nvars, True)
    return GroebnerBasis(order, basis.elements, nvars, True, is_zero_dimensional(basis))


def buchberger(
    ideal: Ideal,
    order: MonomialOrder = GREVLEX,
    *,
    max_basis_size: int = DEFAULT_MAX_BASIS_SIZE,
    max_degree: int = DEFAULT_MAX_DEGREE,
    max_reductions: int = DEFAULT_MAX_REDUCTIONS,
    max_terms: int = DEFAULT_MAX_TERMS,
    max_seconds: Optional[float] = DEFAULT_MAX_SECONDS,
    deadline: Optional[float] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis with the product and chain criteria and a degree-ordered pair queue.

    Raises :class:`ResourceExceeded` when the basis grows past ``max_basis_size`` elements
    or ``max_degree``, after ``max_reductions`` S-polynomial reductions, when a working
    polynomial exceeds ``max_terms`` terms, or once ``max_seconds`` (or ``deadline``) passes.
    """

    nvars = ideal.nvars
    meter = _Meter("buchberger", order, max_reductions, max_terms, deadline_after(max_seconds, deadline))
    basis: List[Polynomial] = []
    leads: List[Monomial] = []
    for poly in ideal.generators:
        monic = poly.monic(order)
        if monic.is_constant():
            return _unit_basis(nvars, order)
        basis.append(monic)
        leads.append(monic.leading_monomial(order))
    if not basis:
        return GroebnerBasis(order, (), nvars, True, nvars == 0)

    pending: Set[Tuple[int, int]] = set()
    queue: List[Tuple[int, tuple, int, int, int]] = []
    counter = itertools.count()

    def push(i: int, j: int) -> None:
        lcm = monomial_lcm(leads[i], leads[j])
        pending.add((i, j))
        heapq.heappush(queue, (sum(lcm), order.key(lcm), next(counter), i, j))

    for j in range(len(basis)):
        for i in range(j):
            push(i, j)

    while queue:
        meter.check()
        _, _, _, i, j = heapq.heappop(queue)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        lcm = monomial_lcm(leads[i], leads[j])
        if lcm == monomial_product(leads[i], leads[j]):
            continue
        if _chain_criterion(i, j, lcm, leads, pending):
            continue
        meter.count()
        remainder = normal_form(_s_polynomial(basis[i], basis[j], order), basis, order, meter.check)
        if remainder.is_zero():
            continue
        remainder = remainder.monic(order)
        if remainder.is_constant():
            LOGGER.debug("Unit ideal detected after %d reductions", meter.reductions)
            return _unit_basis(nvars, order)
        degree = remainder.total_degree()
        if len(basis) + 1 > max_basis_size or degree > max_degree:
            raise meter.exceeded(
                "Groebner basis",
                basis_size=len(basis) + 1,
                degree=degree,
                max_basis_size=max_basis_size,
                max_degree=max_degree,
                pairs_left=len(pending),
            )
        basis.append(remainder)
        leads.append(remainder.leading_monomial(order))
        new = len(basis) - 1
        for i in range(new):
            push(i, new)
        if meter.reductions % 200 == 0:
            LOGGER.debug(
                "Buchberger: %d reductions, basis size %d, %d pairs pending", meter.reductions, len(basis), len(pending)
            )

    return reduce_basis(basis, order, nvars, meter.check)


def _chain_criterion(
    i: int, j: int, lcm: Monomial, leads: Sequence[Monomial], pending: Set[Tuple[int, int]]
) -> bool:
    for k, lead in enumerate(leads):
        if k in (i, j) or not monomial_divides(lead, lcm):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def groebner_basis(
    generators: Iterable[Polynomial],
    order: MonomialOrder = GREVLEX,
    nvars: Optional[int] = None,
    **budget: Any,
) -> GroebnerBasis:
    return buchberger(Ideal.of(generators, nvars), order, **budget)


def ideal_sum(first: Ideal, second: Ideal) -> Ideal:
    if first.nvars != second.nvars:
        raise StructuralError(f"cannot add ideals of arity {first.nvars} and {second.nvars}")
    return Ideal(first.nvars, first.generators + second.generators)


def ideal_contains(basis: GroebnerBasis, poly: Polynomial) -> bool:
    return basis.contains(poly)


def saturate(
    ideal: Ideal,
    h: Polynomial,
    **budget: Any,
) -> Ideal:
    """``I : <h>^inf`` by eliminating a fresh variable ``y`` from ``I + <1 - y*h>``.

    ``y`` is appended after the ring variables and ranked highest in a lex order; the
    returned generators form the reduced lex basis of the saturation.  When the lifted
    ideal is zero-dimensional its lex basis is obtained from a grevlex one by FGLM.
    ``budget`` takes the keywords of :func:`buchberger`; one deadline covers every step.
    """

    if h.is_zero():
        raise DomainError("cannot saturate by the zero polynomial")
    if h.nvars != ideal.nvars:
        raise StructuralError(f"saturating polynomial of arity {h.nvars} for an ideal of arity {ideal.nvars}")
    budget = branch_budget(budget)
    nvars = ideal.nvars
    if h.is_constant():
        return Ideal(nvars, buchberger(ideal, LEX, **budget).elements)
    extended = [poly.extend() for poly in ideal.generators]
    y = Polynomial.variable(nvars + 1, nvars)
    extended.append(1 - y * h.extend())
    elimination = MonomialOrder.lex((nvars,) + tuple(range(nvars)))
    lifted = Ideal(nvars + 1, tuple(extended))
    start = buchberger(lifted, GREVLEX, **budget)
    if start.is_unit:
        return Ideal.unit(nvars)
    if is_zero_dimensional(start):
        basis = fglm(start, elimination, **budget)
    else:
        basis = buchberger(lifted, elimination, **budget)
    kept = tuple(poly.drop_last() for poly in basis.elements if not poly.degree_in(nvars) > 0)
    LOGGER.debug("Saturation kept %d of %d elements", len(kept), len(basis.elements))
    return Ideal(nvars, kept)


def is_zero_dimensional(basis: GroebnerBasis) -> bool:
    if basis.is_unit:
        return True
    covered = set()
    for lead in basis.leading_monomials():
        var = pure_power_variable(lead)
        if var is not None:
            covered.add(var)
    return len(covered) == basis.nvars


class _Echelon:
    """Incremental row echelon form of normal-form vectors.

    Each row keeps the polynomial it came from so that a dependency directly yields
    the ideal member ``candidate - combination``.
    """

    def __init__(self, order: MonomialOrder) -> None:
        self._order = order
        self._rows: List[Tuple[Monomial, Dict[Monomial, Fraction], Dict[Monomial, Fraction]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def insert(self, vector: Dict[Monomial, Fraction], source: Dict[Monomial, Fraction]) -> Optional[Dict[Monomial, Fraction]]:
        """Add a row; return the reduced ``source`` when ``vector`` is dependent."""

        vector = dict(vector)
        source = dict(source)
        for pivot, row_vector, row_source in self._rows:
            factor = vector.get(pivot)
            if not factor:
                continue
            _axpy(vector, -factor, row_vector)
            _axpy(source, -factor, row_source)
        if not vector:
            return source
        pivot = max(vector, key=self._order.key)
        scale = vector[pivot]
        self._rows.append(
            (pivot, {m: c / scale for m, c in vector.items()}, {m: c / scale for m, c in source.items()})
        )
        return None


def _axpy(target: Dict[Monomial, Fraction], factor: Fraction, source: Dict[Monomial, Fraction]) -> None:
    for monomial, coefficient in source.items():
        value = target.get(monomial, 0) + factor * coefficient
        if value:
            target[monomial] = value
        else:
            target.pop(monomial, None)


def fglm(basis: GroebnerBasis, target: MonomialOrder = LEX, **budget: Any) -> GroebnerBasis:
    """Convert a reduced zero-dimensional basis to ``target`` by linear algebra in the quotient ring.

    Every normal-form vector counts as one reduction against ``budget``.
    """

    if not is_zero_dimensional(basis):
        raise DomainError("FGLM requires a zero-dimensional Groebner basis")
    nvars = basis.nvars
    if basis.is_unit:
        return _unit_basis(nvars, target)

    one: Monomial = (0,) * nvars
    echelon = _Echelon(basis.order)
    normal_forms: Dict[Monomial, Dict[Monomial, Fraction]] = {}
    new_elements: List[Polynomial] = []
    new_leads: List[Monomial] = []
    frontier: Dict[Monomial, Optional[Tuple[Monomial, int]]] = {one: None}
    meter = _meter("fglm", target, **budget)

    while frontier:
        meter.check()
        monomial = min(frontier, key=target.key)
        parent = frontier.pop(monomial)
        if any(monomial_divides(lead, monomial) for lead in new_leads):
            continue
        if parent is None:
            vector = dict(basis.reduce(Polynomial._trusted(nvars, {one: Fraction(1)}), meter.check).items())
        else:
            base, var = parent
            raised = Polynomial._trusted(nvars, normal_forms[base]).shift(_unit_vector(nvars, var))
            vector = dict(basis.reduce(raised, meter.check).items())
        meter.count()
        dependency = echelon.insert(vector, {monomial: Fraction(1)})
        if dependency is not None:
            element = Polynomial._trusted(nvars, {m: c for m, c in dependency.items() if c})
            new_elements.append(element)
            new_leads.append(monomial)
            continue
        normal_forms[monomial] = vector
        for var in range(nvars):
            successor = monomial_product(monomial, _unit_vector(nvars, var))
            if successor not in frontier and successor not in normal_forms:
                frontier[successor] = (monomial, var)

    LOGGER.debug("FGLM: quotient dimension %d, %d new elements", len(normal_forms), len(new_elements))
    return reduce_basis(new_elements, target, nvars, meter.check)


def _unit_vector(nvars: int, index: int) -> Monomial:
    return tuple(1 if position == index else 0 for position in range(nvars))


def univariate_eliminant(basis: GroebnerBasis, index: int, **budget: Any) -> Polynomial:
    """Monic generator of ``I ∩ Q[z_index]`` for a zero-dimensional basis."""

    if not is_zero_dimensional(basis):
        raise DomainError("univariate eliminants exist only for zero-dimensional ideals")
    nvars = basis.nvars
    if basis.is_unit:
        return Polynomial.constant(nvars, 1)
    echelon = _Echelon(basis.order)
    variable = Polynomial.variable(nvars, index)
    meter = _meter("eliminant", basis.order, **budget)
    current = basis.reduce(Polynomial.constant(nvars, 1))
    power = 0
    while True:
        monomial = tuple(power if position == index else 0 for position in range(nvars))
        dependency = echelon.insert(dict(current.items()), {monomial: Fraction(1)})
        if dependency is not None:
            return Polynomial(nvars, dependency).monic(LEX)
        meter.count()
        meter.check()
        power += 1
        current = basis.reduce(current * variable, meter.check)


def zero_dim_radical(basis: GroebnerBasis, **budget: Any) -> Ideal:
    """Add the square-free part of every univariate eliminant to the basis."""

    if not is_zero_dimensional(basis):
        raise DomainError("zero_dim_radical requires a zero-dimensional Groebner basis")
    nvars = basis.nvars
    added: List[Polynomial] = []
    if not basis.is_unit:
        for index in range(nvars):
            eliminant = univariate_eliminant(basis, index, **budget)
            coeffs = univariate.to_coefficients(eliminant, index)
            squarefree = univariate.squarefree_part(coeffs)
            if len(squarefree) < len(coeffs):
                added.append(univariate.from_coefficients(squarefree, nvars, index))
    if added:
        LOGGER.debug("Radical: replaced %d eliminants by their square-free parts", len(added))
    return Ideal(nvars, basis.elements + tuple(added))


def radical_basis(basis: GroebnerBasis, **budget: Any) -> GroebnerBasis:
    """Reduced basis of the zero-dimensional radical in the order of ``basis``."""

    budget = branch_budget(budget)
    ideal = zero_dim_radical(basis, **budget)
    if len(ideal.generators) == len(basis.elements):
        return basis
    return buchberger(ideal, basis.order, **budget)


__all__ = [
    "GroebnerBasis",
    "Ideal",
    "branch_budget",
    "buchberger",
    "deadline_after",
    "fglm",
    "groebner_basis",
    "ideal_contains",
    "ideal_sum",
    "is_zero_dimensional",
    "radical_basis",
    "reduce_basis",
    "saturate",
    "univariate_eliminant",
    "zero_dim_radical",
]

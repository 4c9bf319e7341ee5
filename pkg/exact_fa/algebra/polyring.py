"""Exact sparse multivariate polynomials over the rationals."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from ..errors import DomainError, StructuralError

LOGGER = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]
OrderKind = Literal["lex", "grevlex"]


class Ordering(IntEnum):
    """Result of comparing two monomials."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise DomainError(f"coefficients must be exact rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class MonomialOrder:
    """A lex or grevlex order applied after permuting the ring variables.

    ``permutation[0]`` names the variable that ranks highest.  An empty permutation
    means the natural variable order.
    """

    kind: OrderKind = "grevlex"
    permutation: Tuple[int, ...] = ()
    _keys: Dict[Monomial, tuple] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("lex", "grevlex"):
            raise DomainError(f"unknown monomial order {self.kind!r}")
        if self.permutation and sorted(self.permutation) != list(range(len(self.permutation))):
            raise DomainError(f"{self.permutation} is not a permutation")

    @classmethod
    def lex(cls, permutation: Sequence[int] = ()) -> "MonomialOrder":
        return cls("lex", tuple(permutation))

    @classmethod
    def grevlex(cls, permutation: Sequence[int] = ()) -> "MonomialOrder":
        return cls("grevlex", tuple(permutation))

    def ranked(self, monomial: Monomial) -> Monomial:
        """Exponents rearranged from the highest ranked variable down."""

        if not self.permutation:
            return monomial
        if len(self.permutation) != len(monomial):
            raise StructuralError(
                f"order over {len(self.permutation)} variables applied to a monomial of arity {len(monomial)}"
            )
        return tuple(monomial[index] for index in self.permutation)

    def key(self, monomial: Monomial) -> tuple:
        """Sort key: a larger key means a larger monomial."""

        cached = self._keys.get(monomial)
        if cached is not None:
            return cached
        ranked = self.ranked(monomial)
        if self.kind == "lex":
            result: tuple = ranked
        else:
            result = (sum(ranked), tuple(-exponent for exponent in reversed(ranked)))
        if len(self._keys) < 200_000:
            self._keys[monomial] = result
        return result

    def variable_ranking(self, nvars: int) -> Tuple[int, ...]:
        """Variable indices from highest to lowest rank."""

        return self.permutation if self.permutation else tuple(range(nvars))

    def tag(self) -> str:
        if not self.permutation:
            return self.kind
        return f"{self.kind}:{','.join(str(index) for index in self.permutation)}"

    @classmethod
    def from_tag(cls, tag: str) -> "MonomialOrder":
        kind, _, perm = tag.partition(":")
        permutation = tuple(int(part) for part in perm.split(",")) if perm else ()
        return cls(kind, permutation)  # type: ignore[arg-type]


LEX = MonomialOrder.lex()
GREVLEX = MonomialOrder.grevlex()


def monomial_cmp(a: Monomial, b: Monomial, order: MonomialOrder) -> Ordering:
    if len(a) != len(b):
        raise StructuralError(f"cannot compare monomials of arity {len(a)} and {len(b)}")
    key_a = order.key(a)
    key_b = order.key(b)
    if key_a == key_b:
        return Ordering.EQUAL
    return Ordering.GREATER if key_a > key_b else Ordering.LESS


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def pure_power_variable(monomial: Monomial) -> Optional[int]:
    """Index of the variable when ``monomial`` is ``z_i^t`` with ``t >= 1``."""

    support = [index for index, exponent in enumerate(monomial) if exponent]
    if len(support) == 1:
        return support[0]
    return None


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to ``Fraction``."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[Monomial, object]] = None) -> None:
        if nvars < 0:
            raise DomainError("ring arity must be non-negative")
        clean: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in (terms or {}).items():
            monomial = tuple(int(exponent) for exponent in monomial)
            if len(monomial) != nvars:
                raise StructuralError(f"monomial {monomial} does not belong to a ring of arity {nvars}")
            if any(exponent < 0 for exponent in monomial):
                raise DomainError(f"negative exponent in {monomial}")
            value = _as_fraction(coefficient)
            if value:
                clean[monomial] = clean.get(monomial, Fraction(0)) + value
                if not clean[monomial]:
                    del clean[monomial]
        self.nvars = nvars
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _trusted(cls, nvars: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly._terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._trusted(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: object) -> "Polynomial":
        coefficient = _as_fraction(value)
        if not coefficient:
            return cls.zero(nvars)
        return cls._trusted(nvars, {(0,) * nvars: coefficient})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise DomainError(f"variable index {index} out of range for arity {nvars}")
        exponents = [0] * nvars
        exponents[index] = 1
        return cls._trusted(nvars, {tuple(exponents): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Monomial, coefficient: object = 1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coefficient})

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(tuple(monomial), Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(monomial) for monomial in self._terms)

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(monomial[index] for monomial in self._terms)

    def variables(self) -> Tuple[int, ...]:
        """Indices of the variables that actually occur."""

        used = set()
        for monomial in self._terms:
            used.update(index for index, exponent in enumerate(monomial) if exponent)
        return tuple(sorted(used))

    def univariate_variable(self) -> Optional[int]:
        used = self.variables()
        if len(used) == 1:
            return used[0]
        return None

    def sorted_terms(self, order: MonomialOrder) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: order.key(item[0]), reverse=True)

    def leading_term(self, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise DomainError("the zero polynomial has no leading term")
        monomial = max(self._terms, key=order.key)
        return monomial, self._terms[monomial]

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self._terms:
            return self
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return self._trusted(self.nvars, {m: c / lc for m, c in self._terms.items()})

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def _coerce(self, other: object) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise StructuralError(f"ring arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        result = dict(self._terms)
        for monomial, coefficient in rhs._terms.items():
            value = result.get(monomial, 0) + coefficient
            if value:
                result[monomial] = value
            else:
                result.pop(monomial, None)
        return self._trusted(self.nvars, result)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self._trusted(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> "Polynomial":
        lhs = self._coerce(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if len(rhs._terms) == 1 and rhs.is_constant():
            return self.scale(rhs.constant_term())
        result: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in rhs._terms.items():
                monomial = monomial_product(m1, m2)
                value = result.get(monomial, 0) + c1 * c2
                if value:
                    result[monomial] = value
                else:
                    result.pop(monomial, None)
        return self._trusted(self.nvars, result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("polynomials only support non-negative integer powers")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: object) -> "Polynomial":
        value = _as_fraction(factor)
        if not value:
            return Polynomial.zero(self.nvars)
        return self._trusted(self.nvars, {m: c * value for m, c in self._terms.items()})

    def shift(self, monomial: Monomial, coefficient: object = 1) -> "Polynomial":
        """Multiply by the term ``coefficient * z^monomial``."""

        value = _as_fraction(coefficient)
        if not value:
            return Polynomial.zero(self.nvars)
        return self._trusted(
            self.nvars,
            {monomial_product(m, monomial): c * value for m, c in self._terms.items()},
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from ..utils.poly_text import format_polynomial

        return f"Polynomial({format_polynomial(self)!r})"

    # ------------------------------------------------------------------
    # Calculus and substitution
    # ------------------------------------------------------------------
    def derivative(self, index: int) -> "Polynomial":
        result: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in self._terms.items():
            exponent = monomial[index]
            if exponent:
                lowered = monomial[:index] + (exponent - 1,) + monomial[index + 1 :]
                result[lowered] = coefficient * exponent
        return self._trusted(self.nvars, result)

    def evaluate(self, point: Sequence[object], one: object = None) -> object:
        """Evaluate at ``point``; works for any type supporting ``+``, ``*`` and ``**``.

        ``one`` seeds the accumulation so that interval or float evaluation keeps its type.
        """

        if len(point) != self.nvars:
            raise StructuralError(f"point of length {len(point)} for ring arity {self.nvars}")
        total: object = Fraction(0) if one is None else one * 0  # type: ignore[operator]
        for monomial, coefficient in self._terms.items():
            value: object = coefficient
            for base, exponent in zip(point, monomial):
                if exponent:
                    value = value * base**exponent  # type: ignore[operator]
            total = total + value  # type: ignore[operator]
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for monomial, coefficient in self._terms.items():
            value = float(coefficient)
            for base, exponent in zip(point, monomial):
                if exponent:
                    value *= float(base) ** exponent
            total += value
        return total

    def substitute(self, mapping: Mapping[int, object]) -> "Polynomial":
        """Replace variables by polynomials (or rational constants) of the same ring."""

        replacements: Dict[int, Polynomial] = {}
        for index, value in mapping.items():
            replacement = self._coerce(value)
            if replacement is NotImplemented:
                raise DomainError(f"cannot substitute {value!r} for variable {index}")
            replacements[index] = replacement
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(index: int, exponent: int) -> Polynomial:
            key = (index, exponent)
            if key not in powers:
                powers[key] = replacements[index] ** exponent
            return powers[key]

        result = Polynomial.zero(self.nvars)
        for monomial, coefficient in self._terms.items():
            kept = tuple(0 if index in replacements else exponent for index, exponent in enumerate(monomial))
            term = Polynomial._trusted(self.nvars, {kept: coefficient})
            for index, exponent in enumerate(monomial):
                if exponent and index in replacements:
                    term = term * power(index, exponent)
            result = result + term
        return result

    def extend(self, extra: int = 1) -> "Polynomial":
        """Append ``extra`` unused variables after the existing ones."""

        padding = (0,) * extra
        return self._trusted(self.nvars + extra, {m + padding: c for m, c in self._terms.items()})

    def drop_last(self, count: int = 1) -> "Polynomial":
        """Inverse of :meth:`extend`; the dropped variables must not occur."""

        result: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in self._terms.items():
            if any(monomial[self.nvars - count :]):
                raise DomainError("cannot drop a variable that occurs in the polynomial")
            result[monomial[: self.nvars - count]] = coefficient
        return self._trusted(self.nvars - count, result)


NORMAL_FORM_CHECK_INTERVAL = 64


def normal_form(
    f: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder,
    check: Optional[Callable[[int], None]] = None,
) -> Polynomial:
    """Fully reduced remainder of ``f`` on division by ``divisors`` (first divisor wins).

    ``check`` is called with the size of the working polynomial every
    ``NORMAL_FORM_CHECK_INTERVAL`` steps; it stops a runaway reduction by raising.
    """

    reducers = []
    for g in divisors:
        if g.nvars != f.nvars:
            raise StructuralError(f"ring arity mismatch: {f.nvars} vs {g.nvars}")
        if g.is_zero():
            raise DomainError("cannot divide by the zero polynomial")
        lm, lc = g.leading_term(order)
        reducers.append((lm, lc, g._terms))

    key = order.key
    current: Dict[Monomial, Fraction] = dict(f._terms)
    remainder: Dict[Monomial, Fraction] = {}
    steps = 0
    while current:
        steps += 1
        if check is not None and steps % NORMAL_FORM_CHECK_INTERVAL == 0:
            check(len(current))
        monomial = max(current, key=key)
        coefficient = current[monomial]
        for lm, lc, g_terms in reducers:
            if monomial_divides(lm, monomial):
                factor = coefficient / lc
                shift = monomial_quotient(monomial, lm)
                for g_monomial, g_coefficient in g_terms.items():
                    target = monomial_product(g_monomial, shift)
                    value = current.get(target, 0) - factor * g_coefficient
                    if value:
                        current[target] = value
                    else:
                        current.pop(target, None)
                break
        else:
            remainder[monomial] = coefficient
            del current[monomial]
    return Polynomial._trusted(f.nvars, remainder)


@dataclass(frozen=True)
class PolynomialRing:
    """Named variables over the rationals; the text format lives in ``utils.poly_text``."""

    names: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise DomainError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as exc:
            raise DomainError(f"unknown variable {name!r}; ring has {', '.join(self.names)}") from exc

    def gen(self, name: str) -> Polynomial:
        return Polynomial.variable(self.nvars, self.index(name))

    @property
    def gens(self) -> Tuple[Polynomial, ...]:
        return tuple(Polynomial.variable(self.nvars, index) for index in range(self.nvars))

    def constant(self, value: object) -> Polynomial:
        return Polynomial.constant(self.nvars, value)

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.nvars)

    def with_variable(self, name: str) -> "PolynomialRing":
        return PolynomialRing(self.names + (name,))

    def parse(self, text: str) -> Polynomial:
        from ..utils.poly_text import parse_polynomial

        return parse_polynomial(text, self.names)

    def format(self, poly: Polynomial, order: Optional[MonomialOrder] = None) -> str:
        from ..utils.poly_text import format_polynomial

        return format_polynomial(poly, self.names, order)

    def check(self, polys: Iterable[Polynomial]) -> None:
        for poly in polys:
            if poly.nvars != self.nvars:
                raise StructuralError(f"polynomial of arity {poly.nvars} in a ring of arity {self.nvars}")


__all__ = [
    "GREVLEX",
    "LEX",
    "Monomial",
    "MonomialOrder",
    "Ordering",
    "Polynomial",
    "PolynomialRing",
    "monomial_cmp",
    "monomial_divides",
    "monomial_lcm",
    "monomial_product",
    "monomial_quotient",
    "normal_form",
    "pure_power_variable",
]

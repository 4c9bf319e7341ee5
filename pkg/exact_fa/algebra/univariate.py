"""Dense univariate arithmetic on ascending coefficient lists of ``Fraction``."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

from ..errors import DomainError
from .polyring import Polynomial

Coefficients = List[Fraction]


def trim(coeffs: Sequence[object]) -> Coefficients:
    result = [Fraction(value) for value in coeffs]  # type: ignore[arg-type]
    while result and not result[-1]:
        result.pop()
    return result


def degree(coeffs: Sequence[Fraction]) -> int:
    return len(trim(coeffs)) - 1


def to_coefficients(poly: Polynomial, index: Optional[int] = None) -> Coefficients:
    """Coefficients of a polynomial in which at most variable ``index`` occurs."""

    if index is None:
        index = poly.univariate_variable()
        if index is None:
            if not poly.is_constant():
                raise DomainError("polynomial is not univariate")
            return trim([poly.constant_term()])
    result: Coefficients = [Fraction(0)] * (max(poly.degree_in(index), 0) + 1)
    for monomial, coefficient in poly.items():
        if any(exponent for position, exponent in enumerate(monomial) if position != index):
            raise DomainError(f"polynomial involves variables other than {index}")
        result[monomial[index]] += coefficient
    return trim(result)


def from_coefficients(coeffs: Sequence[Fraction], nvars: int, index: int) -> Polynomial:
    terms = {}
    for power, coefficient in enumerate(coeffs):
        if coefficient:
            exponents = [0] * nvars
            exponents[index] = power
            terms[tuple(exponents)] = coefficient
    return Polynomial(nvars, terms)


def evaluate(coeffs: Sequence[Fraction], x: object) -> object:
    """Horner evaluation for any numeric type."""

    total: object = 0
    for coefficient in reversed(coeffs):
        total = total * x + coefficient  # type: ignore[operator]
    return total


def derivative(coeffs: Sequence[Fraction]) -> Coefficients:
    return trim([coefficient * power for power, coefficient in enumerate(coeffs)][1:])


def monic(coeffs: Sequence[Fraction]) -> Coefficients:
    result = trim(coeffs)
    if not result:
        return result
    lead = result[-1]
    return [coefficient / lead for coefficient in result]


def divmod_poly(numerator: Sequence[Fraction], denominator: Sequence[Fraction]) -> Tuple[Coefficients, Coefficients]:
    divisor = trim(denominator)
    if not divisor:
        raise DomainError("division by the zero polynomial")
    remainder = trim(numerator)
    quotient: Coefficients = [Fraction(0)] * max(len(remainder) - len(divisor) + 1, 0)
    lead = divisor[-1]
    while len(remainder) >= len(divisor):
        shift = len(remainder) - len(divisor)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for position, coefficient in enumerate(divisor):
            remainder[shift + position] -= factor * coefficient
        remainder = trim(remainder)
    return trim(quotient), remainder


def gcd_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> Coefficients:
    """Monic greatest common divisor (Euclid)."""

    x, y = trim(a), trim(b)
    while y:
        x, y = y, divmod_poly(x, y)[1]
    return monic(x)


def squarefree_part(coeffs: Sequence[Fraction]) -> Coefficients:
    """Monic ``f / gcd(f, f')``."""

    f = trim(coeffs)
    if not f:
        raise DomainError("the zero polynomial has no square-free part")
    if len(f) == 1:
        return [Fraction(1)]
    common = gcd_poly(f, derivative(f))
    return monic(divmod_poly(f, common)[0])


def primitive_integer_form(coeffs: Sequence[Fraction]) -> List[int]:
    """Integer multiple with content 1 and positive leading coefficient."""

    f = trim(coeffs)
    if not f:
        return []
    lcm_den = reduce(lambda acc, c: acc * c.denominator // math.gcd(acc, c.denominator), f, 1)
    integers = [int(c * lcm_den) for c in f]
    content = reduce(math.gcd, (abs(value) for value in integers))
    sign = 1 if integers[-1] > 0 else -1
    return [sign * value // content for value in integers]


def cauchy_bound(coeffs: Sequence[Fraction]) -> Fraction:
    """Every real root lies strictly inside ``(-B, B)``."""

    f = trim(coeffs)
    lead = abs(f[-1])
    return 1 + max((abs(c) / lead for c in f[:-1]), default=Fraction(0))


def sturm_sequence(coeffs: Sequence[Fraction]) -> List[Coefficients]:
    f = trim(coeffs)
    sequence = [f, derivative(f)]
    while sequence[-1]:
        remainder = divmod_poly(sequence[-2], sequence[-1])[1]
        if not remainder:
            break
        sequence.append([-c for c in remainder])
    return [item for item in sequence if item]


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def sign_variations(sequence: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    """Sign changes of the sequence evaluated at ``x``, zeros dropped."""

    signs = [s for s in (_sign(evaluate(item, x)) for item in sequence) if s]  # type: ignore[arg-type]
    return sum(1 for left, right in zip(signs, signs[1:]) if left != right)


def sign_variations_at_infinity(sequence: Sequence[Sequence[Fraction]], positive: bool) -> int:
    signs = []
    for item in sequence:
        lead = _sign(item[-1])
        if not positive and (len(item) - 1) % 2:
            lead = -lead
        signs.append(lead)
    return sum(1 for left, right in zip(signs, signs[1:]) if left != right)


def count_real_roots(coeffs: Sequence[Fraction]) -> int:
    """Number of distinct real roots."""

    f = trim(coeffs)
    if not f:
        raise DomainError("the zero polynomial has infinitely many roots")
    sequence = sturm_sequence(f)
    return sign_variations_at_infinity(sequence, False) - sign_variations_at_infinity(sequence, True)


__all__ = [
    "Coefficients",
    "cauchy_bound",
    "count_real_roots",
    "degree",
    "derivative",
    "divmod_poly",
    "evaluate",
    "from_coefficients",
    "gcd_poly",
    "monic",
    "primitive_integer_form",
    "sign_variations",
    "sign_variations_at_infinity",
    "squarefree_part",
    "sturm_sequence",
    "to_coefficients",
    "trim",
]

"""Helpers for the plain-text polynomial format used by fixtures and reports.

The format is ``3/4*l11^2*l21 - 1/2``: terms joined by ``+``/``-``, factors joined by
``*``, powers written with ``^`` and coefficients as integers, ``p/q`` rationals or
finite decimals.
"""

from __future__ import annotations

import re
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..algebra.polyring import GREVLEX, MonomialOrder, Polynomial
from ..errors import DomainError

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_NUMBER = re.compile(r"^(\d+(\.\d*)?|\.\d+)(/\d+)?$")


def default_names(nvars: int) -> Tuple[str, ...]:
    return tuple(f"z{index}" for index in range(1, nvars + 1))


def normalize_text(text: str) -> str:
    text = text.strip().replace(" ", "").replace("\t", "").replace("**", "^")
    return text.replace("−", "-")


def parse_rational(token: str) -> Fraction:
    """Exact value of ``p/q``, an integer or a finite decimal such as ``0.35``."""

    token = normalize_text(token)
    sign = 1
    if token.startswith(("+", "-")):
        sign = -1 if token[0] == "-" else 1
        token = token[1:]
    if not _NUMBER.match(token):
        raise DomainError(f"not an exact rational: {token!r}")
    numerator, _, denominator = token.partition("/")
    try:
        value = Fraction(Decimal(numerator))
    except InvalidOperation as exc:
        raise DomainError(f"not an exact rational: {token!r}") from exc
    if denominator:
        divisor = int(denominator)
        if divisor == 0:
            raise DomainError(f"zero denominator in {token!r}")
        value /= divisor
    return sign * value


def split_terms(text: str) -> List[str]:
    text = normalize_text(text)
    if not text:
        return []
    terms: List[str] = []
    start = 0
    for index in range(1, len(text)):
        if text[index] in "+-" and text[index - 1] not in "^*/":
            terms.append(text[start:index])
            start = index
    terms.append(text[start:])
    return [term for term in terms if term not in ("", "+")]


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    names = tuple(names)
    positions: Dict[str, int] = {name: index for index, name in enumerate(names)}
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for raw in split_terms(text):
        sign = Fraction(1)
        term = raw
        if term[0] in "+-":
            sign = Fraction(-1 if term[0] == "-" else 1)
            term = term[1:]
        coefficient = sign
        exponents = [0] * len(names)
        for factor in term.split("*"):
            if not factor:
                raise DomainError(f"empty factor in term {raw!r}")
            base, _, power = factor.partition("^")
            if base in positions:
                exponent = int(power) if power else 1
                if exponent < 0:
                    raise DomainError(f"negative exponent in {raw!r}")
                exponents[positions[base]] += exponent
            elif _NAME.match(base):
                raise DomainError(f"unknown variable {base!r}; ring has {', '.join(names) or 'no variables'}")
            else:
                value = parse_rational(base)
                coefficient *= value ** int(power) if power else value
        monomial = tuple(exponents)
        terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
    return Polynomial(len(names), terms)


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_monomial(monomial: Sequence[int], names: Sequence[str]) -> str:
    factors: List[str] = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors)


def format_polynomial(
    poly: Polynomial,
    names: Optional[Sequence[str]] = None,
    order: Optional[MonomialOrder] = None,
) -> str:
    names = tuple(names) if names is not None else default_names(poly.nvars)
    if len(names) != poly.nvars:
        raise DomainError(f"{len(names)} names for a ring of arity {poly.nvars}")
    if poly.is_zero():
        return "0"
    pieces: List[str] = []
    for monomial, coefficient in poly.sorted_terms(order or GREVLEX):
        body = format_monomial(monomial, names)
        magnitude = abs(coefficient)
        if not body:
            text = format_rational(magnitude)
        elif magnitude == 1:
            text = body
        else:
            text = f"{format_rational(magnitude)}*{body}"
        if not pieces:
            pieces.append(f"-{text}" if coefficient < 0 else text)
        else:
            pieces.append(f"{'-' if coefficient < 0 else '+'} {text}")
    return " ".join(pieces)


__all__ = [
    "default_names",
    "format_monomial",
    "format_polynomial",
    "format_rational",
    "normalize_text",
    "parse_polynomial",
    "parse_rational",
    "split_terms",
]

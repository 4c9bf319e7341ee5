"""Conversions between exact rationals, decimals and floats."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

def simplest_rational(lower: Fraction, upper: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval ``[lower, upper]``."""

    if lower > upper:
        lower, upper = upper, lower
    if lower <= 0 <= upper:
        return Fraction(0)
    if upper < 0:
        return -simplest_rational(-upper, -lower)
    floor = math.floor(lower)
    if floor == lower:
        return Fraction(floor)
    if floor + 1 <= upper:
        return Fraction(floor + 1)
    return floor + 1 / simplest_rational(1 / (upper - floor), 1 / (lower - floor))


def round_to_decimals(value: object, decimals: int) -> Fraction:
    """Round half-to-even at ``decimals`` places and return the exact result."""

    with localcontext() as context:
        context.prec = 60
        quantum = Decimal(1).scaleb(-decimals)
        if isinstance(value, Fraction):
            exact = Decimal(value.numerator) / Decimal(value.denominator)
        elif isinstance(value, float):
            exact = Decimal(repr(float(value)))
        else:
            exact = Decimal(value)  # type: ignore[arg-type]
        rounded = exact.quantize(quantum, rounding=ROUND_HALF_EVEN)
    return Fraction(rounded)


def to_decimal_string(value: Fraction, digits: int = 17) -> str:
    """Decimal text of ``value`` with ``digits`` significant digits."""

    with localcontext() as context:
        context.prec = digits
        result = Decimal(value.numerator) / Decimal(value.denominator)
    return format(result.normalize(), "f") if result else "0"


__all__ = [
    "round_to_decimals",
    "simplest_rational",
    "to_decimal_string",
]

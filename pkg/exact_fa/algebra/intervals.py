"""Closed intervals with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import DomainError

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    """``[lower, upper]``; arithmetic is exact, so every enclosure is rigorous."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if self.lower > self.upper:
            raise DomainError(f"empty interval [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, value: Number) -> "Interval":
        return cls(Fraction(value), Fraction(value))

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: Number) -> bool:
        return self.lower <= value <= self.upper

    def contains_zero(self) -> bool:
        return self.lower <= 0 <= self.upper

    def magnitude(self) -> Fraction:
        return max(abs(self.lower), abs(self.upper))

    def overlaps(self, other: "Interval") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lower, other.lower), max(self.upper, other.upper))

    def __float__(self) -> float:
        return float(self.midpoint)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    @staticmethod
    def _lift(value: object) -> "Interval":
        if isinstance(value, Interval):
            return value
        if isinstance(value, (int, Fraction)):
            return Interval.point(value)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "Interval":
        rhs = self._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        return Interval(self.lower + rhs.lower, self.upper + rhs.upper)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.upper, -self.lower)

    def __sub__(self, other: object) -> "Interval":
        rhs = self._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        return Interval(self.lower - rhs.upper, self.upper - rhs.lower)

    def __rsub__(self, other: object) -> "Interval":
        lhs = self._lift(other)
        if lhs is NotImplemented:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> "Interval":
        rhs = self._lift(other)
        if rhs is NotImplemented:
            return NotImplemented
        if rhs.is_point:
            factor = rhs.lower
            low, high = self.lower * factor, self.upper * factor
            return Interval(min(low, high), max(low, high))
        products = (
            self.lower * rhs.lower,
            self.lower * rhs.upper,
            self.upper * rhs.lower,
            self.upper * rhs.upper,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Interval":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("intervals only support non-negative integer powers")
        if exponent == 0:
            return Interval.point(1)
        low, high = self.lower**exponent, self.upper**exponent
        if exponent % 2:
            return Interval(low, high)
        if self.contains_zero():
            return Interval(Fraction(0), max(low, high))
        return Interval(min(low, high), max(low, high))

    def __repr__(self) -> str:
        if self.is_point:
            return f"Interval({self.lower})"
        return f"Interval([{float(self.lower):.6g}, {float(self.upper):.6g}])"


__all__ = ["Interval"]

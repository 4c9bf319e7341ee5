"""Utility helpers for exact_fa."""

from .rationals import round_to_decimals, simplest_rational, to_decimal_string

__all__ = ["round_to_decimals", "simplest_rational", "to_decimal_string"]

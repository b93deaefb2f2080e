"""Exact rational helpers shared across the package.

All lengths and heights are `fractions.Fraction` values so that equality
tests, candidate-set membership and threshold comparisons are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    """Parse `p/q`, integer, or decimal notation into a Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render a Fraction as `p/q`, always with an explicit denominator."""
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int) -> str:
    """Render a Fraction as a fixed-point decimal with `digits` places."""
    if digits < 0:
        raise ValueError("digits must be nonnegative")
    scaled = value * 10**digits
    units = scaled.numerator // scaled.denominator
    if scaled.numerator % scaled.denominator * 2 >= scaled.denominator:
        units += 1
    sign = "-" if units < 0 else ""
    units = abs(units)
    if digits == 0:
        return f"{sign}{units}"
    return f"{sign}{units // 10**digits}.{units % 10**digits:0{digits}d}"


def isqrt_ceil(value: Fraction) -> int:
    """Smallest integer k >= 0 with k*k >= value, computed exactly."""
    if value <= 0:
        return 0
    num, den = value.numerator, value.denominator
    k = math.isqrt(num // den)
    while k * k * den < num:
        k += 1
    return k

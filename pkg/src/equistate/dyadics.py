"""Exact rational and dyadic helpers.

Everything here is integer arithmetic underneath: no floats are consulted
for any value that feeds a certified bound.  Rationals serialize as "p/q"
(lowest terms, q > 0) and dyadics as "m*2^e".
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ParseError

ZERO = Fraction(0)
ONE = Fraction(1)


def is_dyadic(q: Fraction) -> bool:
    """True if q has a power-of-two denominator."""
    d = q.denominator
    return d & (d - 1) == 0


def round_to_dyadic(q: Fraction, bits: int) -> Fraction:
    """Nearest multiple of 2^-bits; ties round toward zero.

    |result - q| <= 2^-(bits+1).
    """
    scaled = q * (1 << bits)
    n, d = scaled.numerator, scaled.denominator
    if n >= 0:
        m = (2 * n + d) // (2 * d)
    else:
        m = -((-2 * n + d) // (2 * d))
    return Fraction(m, 1 << bits)


def floor_to_dyadic(q: Fraction, bits: int) -> Fraction:
    scaled = q * (1 << bits)
    return Fraction(scaled.numerator // scaled.denominator, 1 << bits)


def ceil_to_dyadic(q: Fraction, bits: int) -> Fraction:
    scaled = q * (1 << bits)
    return Fraction(-((-scaled.numerator) // scaled.denominator), 1 << bits)


def sqrt_lower(q: Fraction, bits: int) -> Fraction:
    """Dyadic s with s <= sqrt(q) and sqrt(q) - s <= 2^-bits.  Requires q >= 0."""
    if q < 0:
        raise ValueError("sqrt_lower of a negative rational")
    if q == 0:
        return ZERO
    # floor(sqrt(q * 4^bits)) / 2^bits, with the integer sqrt taken on a
    # floor of the scaled value; flooring only lowers the result.
    shift = 2 * bits
    scaled = (q.numerator << shift) // q.denominator
    return Fraction(math.isqrt(scaled), 1 << bits)


def sqrt_upper(q: Fraction, bits: int) -> Fraction:
    """Dyadic s with s >= sqrt(q) and s - sqrt(q) <= 2^-bits.  Requires q >= 0."""
    if q < 0:
        raise ValueError("sqrt_upper of a negative rational")
    if q == 0:
        return ZERO
    shift = 2 * bits
    scaled = -((-(q.numerator << shift)) // q.denominator)  # ceil
    r = math.isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, 1 << bits)


def sqrt_exact(q: Fraction) -> Fraction | None:
    """Exact rational square root of q, or None if q is not a perfect square."""
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def format_dyadic(q: Fraction) -> str:
    """Render a dyadic rational as "m*2^e" with odd m (or 0)."""
    if not is_dyadic(q):
        raise ValueError(f"{q} is not dyadic")
    if q == 0:
        return "0*2^0"
    n = q.numerator
    e = -(q.denominator.bit_length() - 1)
    while n % 2 == 0:
        n //= 2
        e += 1
    return f"{n}*2^{e}"


def parse_dyadic(text: str) -> Fraction:
    try:
        m_str, e_str = text.strip().split("*2^")
        m, e = int(m_str), int(e_str)
    except ValueError as exc:
        raise ParseError(f"not a dyadic: {text!r}") from exc
    return Fraction(m) * Fraction(2) ** e


def bit_floor_log2(q: Fraction) -> int:
    """Largest e with 2^e <= q.  Requires q > 0."""
    if q <= 0:
        raise ValueError("bit_floor_log2 requires a positive argument")
    n, d = q.numerator, q.denominator
    e = n.bit_length() - d.bit_length()
    # Two candidates remain after comparing bit lengths; settle exactly.
    if e >= 0:
        if (d << e) > n:
            e -= 1
    else:
        if d > (n << -e):
            e -= 1
    return e

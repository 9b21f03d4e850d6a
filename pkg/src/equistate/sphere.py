"""The Riemann sphere as a computable metric space.

Points are exact Gaussian rationals plus an explicit point at infinity.
The chordal metric sigma is evaluated through one certified square root of
an exactly computed rational, so sigma^2 comparisons are always exact.

The ideal-point enumeration is a bijection from the positive integers onto
Q(i): rationals are enumerated through the Calkin--Wilf tree (0 first,
then +/- pairs) and coordinate pairs through the Cantor pairing, so every
index decomposes recoverably and `ideal_index` inverts `ideal_enumerate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .balls import BallReal, sqrt_of_rational
from .dyadics import ZERO
from .gauss import GaussRat
from .errors import ParseError


@dataclass(frozen=True)
class SpherePoint:
    """A point of the Riemann sphere: finite Gaussian rational or infinity."""

    value: GaussRat | None  # None encodes the point at infinity

    @staticmethod
    def finite(re: Fraction | int, im: Fraction | int = 0) -> "SpherePoint":
        return SpherePoint(GaussRat.of(re, im))

    @staticmethod
    def of(z: GaussRat) -> "SpherePoint":
        return SpherePoint(z)

    @staticmethod
    def infinity() -> "SpherePoint":
        return SpherePoint(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def as_gauss(self) -> GaussRat:
        if self.value is None:
            raise ValueError("point at infinity has no finite coordinates")
        return self.value

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return "inf" if self.value is None else repr(self.value)

    def sort_key(self) -> tuple:
        # Infinity sorts after every finite point.
        if self.value is None:
            return (1, ZERO, ZERO)
        return (0, self.value.re, self.value.im)


INF = SpherePoint.infinity()


@dataclass(frozen=True)
class PointBall:
    """Certified chordal disc: sigma(center, x) <= rad for the point x."""

    center: SpherePoint
    rad: Fraction

    def __post_init__(self) -> None:
        if self.rad < 0:
            raise ValueError("disc radius must be nonnegative")


@dataclass(frozen=True)
class Oracle:
    """Precision-indexed point query: sigma(query(n), target) < 2^-n.

    Queries must be pure: the same n always returns the same point.
    """

    query: Callable[[int], SpherePoint]


# -- chordal metric ---------------------------------------------------


def chordal_sq(z: SpherePoint, w: SpherePoint) -> Fraction:
    """Exact rational sigma(z, w)^2."""
    if z.is_infinity and w.is_infinity:
        return ZERO
    if z.is_infinity:
        return Fraction(4) / (1 + w.as_gauss().abs2())
    if w.is_infinity:
        return Fraction(4) / (1 + z.as_gauss().abs2())
    a, b = z.as_gauss(), w.as_gauss()
    return 4 * (a - b).abs2() / ((1 + a.abs2()) * (1 + b.abs2()))


def chordal(z: SpherePoint, w: SpherePoint, prec: int = 53) -> BallReal:
    """Ball containing sigma(z, w) with rad <= 2^-prec.

    Exact (rad 0) whenever sigma^2 is a perfect rational square, e.g.
    sigma(0, inf) = 2.
    """
    return sqrt_of_rational(chordal_sq(z, w), prec)


# -- enumeration of ideal points --------------------------------------


def _calkin_wilf(m: int) -> Fraction:
    """m-th positive rational in the breadth-first Calkin--Wilf order, m >= 1."""
    a, b = 1, 1
    for bit in bin(m)[3:]:  # walk from the root along m's binary digits
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


def _calkin_wilf_index(q: Fraction) -> int:
    """Inverse of _calkin_wilf; q must be positive.

    Walks to the root with division-sized strides (runs of equal bits are
    continued-fraction quotients), so deep rationals index fast.
    """
    a, b = q.numerator, q.denominator
    runs: list[tuple[str, int]] = []
    while (a, b) != (1, 1):
        if a > b:
            k = (a - 1) // b
            a -= k * b
            runs.append(("1", k))
        else:
            k = (b - 1) // a
            b -= k * a
            runs.append(("0", k))
    bits = "".join(bit * count for bit, count in reversed(runs))
    return int("1" + bits, 2)


def _rat_enumerate(i: int) -> Fraction:
    """Bijection from {1, 2, ...} onto Q with index 1 -> 0."""
    if i == 1:
        return ZERO
    half, odd = divmod(i, 2)
    q = _calkin_wilf(half)
    return -q if odd else q


def _rat_index(q: Fraction) -> int:
    if q == 0:
        return 1
    m = _calkin_wilf_index(abs(q))
    return 2 * m + 1 if q < 0 else 2 * m


def _cantor_pair(i: int, j: int) -> int:
    d = i + j - 2
    return d * (d + 1) // 2 + i


def _cantor_unpair(k: int) -> tuple[int, int]:
    import math

    d = (math.isqrt(8 * k - 7) - 1) // 2
    while d * (d + 1) // 2 >= k:
        d -= 1
    while (d + 1) * (d + 2) // 2 < k:
        d += 1
    i = k - d * (d + 1) // 2
    return i, d + 2 - i


def ideal_enumerate(k: int) -> SpherePoint:
    """k-th ideal point (k >= 1); k = 1 gives 0 + 0i."""
    if k < 1:
        raise ValueError("enumeration index must be >= 1")
    i, j = _cantor_unpair(k)
    return SpherePoint(GaussRat(_rat_enumerate(i), _rat_enumerate(j)))


def ideal_index(p: SpherePoint) -> int:
    """Inverse of ideal_enumerate (finite points only)."""
    if p.is_infinity:
        raise ValueError("infinity is not an ideal point")
    z = p.as_gauss()
    return _cantor_pair(_rat_index(z.re), _rat_index(z.im))


def ideal_near(p: SpherePoint, n: int) -> int:
    """Index of an ideal point within chordal distance 2^-n of p.

    Constructive density witness: rounds the coordinates (or inverts, for
    infinity) and returns the index of the resulting Gaussian rational.
    """
    if p.is_infinity:
        candidate = SpherePoint.finite(Fraction(1 << (n + 1)), 0)
    else:
        z = p.as_gauss()
        # |z' - z| <= 2^-(n+2) * sqrt(2) and sigma <= 2|z - z'|.
        candidate = SpherePoint(z.round(n + 3))
    if chordal_sq(candidate, p) >= Fraction(1, 1 << (2 * n)):
        raise ValueError("density witness failed")  # pragma: no cover
    return ideal_index(candidate)


def chordal_disc_radius(z: GaussRat, euclid_rad: Fraction, bits: int = 40) -> Fraction:
    """Upper bound on sup {sigma(z, w) : |w - z| <= euclid_rad} (Euclidean).

    Tighter than the crude sigma <= 2|z - w| for large |z|, where the
    chordal metric contracts.
    """
    from .dyadics import sqrt_lower, sqrt_upper

    if euclid_rad == 0:
        return ZERO
    a2 = z.abs2()
    m = sqrt_lower(a2, bits) - euclid_rad
    if m < 0:
        m = ZERO
    bound2 = 4 * euclid_rad * euclid_rad / ((1 + a2) * (1 + m * m))
    return min(sqrt_upper(bound2, bits), Fraction(2))


def oracle_of(p: SpherePoint) -> Oracle:
    """Oracle answering queries for p.

    Exact finite points answer with themselves; infinity answers with a
    finite point t satisfying 2/sqrt(1+|t|^2) < 2^-n.
    """
    if p.is_infinity:
        def query(n: int) -> SpherePoint:
            return SpherePoint.finite(Fraction(1 << (n + 1)), 0)
    else:
        def query(n: int) -> SpherePoint:
            return p
    return Oracle(query=query)


# -- serialization ----------------------------------------------------


def sphere_point_to_json(p: SpherePoint):
    if p.is_infinity:
        return "inf"
    z = p.as_gauss()
    from .dyadics import format_rational

    return {"re": format_rational(z.re), "im": format_rational(z.im)}


def sphere_point_from_json(obj) -> SpherePoint:
    if obj == "inf":
        return INF
    try:
        return SpherePoint.finite(Fraction(obj["re"]), Fraction(obj["im"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad sphere point: {obj!r}") from exc

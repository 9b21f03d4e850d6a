"""Univariate polynomials with exact Gaussian-rational coefficients.

Supports the exact algebra the dynamics needs: Horner evaluation,
derivatives, Euclidean division, monic gcd, and Yun square-free
decomposition (characteristic zero, so gcd-based multiplicity splitting
is exact).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gauss import G_ONE, G_ZERO, GaussRat


def _strip(coeffs: tuple[GaussRat, ...]) -> tuple[GaussRat, ...]:
    n = len(coeffs)
    while n > 0 and coeffs[n - 1].is_zero():
        n -= 1
    return coeffs[:n]


@dataclass(frozen=True)
class Polynomial:
    """coeffs[k] multiplies z^k; the zero polynomial has empty coeffs."""

    coeffs: tuple[GaussRat, ...]

    @staticmethod
    def of(*coeffs: GaussRat | Fraction | int) -> "Polynomial":
        lifted = tuple(
            c if isinstance(c, GaussRat) else GaussRat.of(c) for c in coeffs
        )
        return Polynomial(_strip(lifted))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def monomial(degree: int, coeff: GaussRat = G_ONE) -> "Polynomial":
        return Polynomial(_strip((G_ZERO,) * degree + (coeff,)))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> GaussRat:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, z: GaussRat) -> GaussRat:
        acc = G_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (G_ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (G_ZERO,) * (n - len(other.coeffs))
        return Polynomial(_strip(tuple(x + y for x, y in zip(a, b))))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [G_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(_strip(tuple(out)))

    def scale(self, c: GaussRat) -> "Polynomial":
        return Polynomial(_strip(tuple(c * a for a in self.coeffs)))

    def derivative(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial.zero()
        return Polynomial(
            _strip(tuple(self.coeffs[k].scale(k) for k in range(1, len(self.coeffs))))
        )

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        if dq < 0:
            return Polynomial.zero(), self
        quot = [G_ZERO] * (dq + 1)
        inv_lead = other.leading().inverse()
        for k in range(dq, -1, -1):
            c = rem[other.degree + k] * inv_lead
            quot[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[j + k] = rem[j + k] - c * b
        return Polynomial(_strip(tuple(quot))), Polynomial(_strip(tuple(rem)))

    def evaluate_reversed(self, degree: int, z: GaussRat) -> GaussRat:
        """Value of z^degree * p(1/z), the degree-d reversal, at z."""
        acc = G_ZERO
        padded = self.coeffs + (G_ZERO,) * (degree + 1 - len(self.coeffs))
        for c in padded:
            acc = acc * z + c
        return acc

    def reversal(self, degree: int) -> "Polynomial":
        """Coefficient-reversed polynomial z^degree * p(1/z)."""
        if degree < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = self.coeffs + (G_ZERO,) * (degree + 1 - len(self.coeffs))
        return Polynomial(_strip(tuple(reversed(padded))))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm (exact over Q(i))."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def square_free_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: [(q_1, 1), (q_2, 2), ...] with p ~ prod q_k^k.

    Each q_k is monic and square-free; factors of multiplicity k collect
    into q_k.  Constant p yields an empty list.
    """
    if p.degree < 1:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b, _ = p.divmod(a)
    c, _ = dp.divmod(a)
    out: list[tuple[Polynomial, int]] = []
    k = 1
    while b.degree >= 1:
        d = c - b.derivative()
        q = poly_gcd(b, d)
        if q.degree >= 1:
            out.append((q.monic(), k))
        b, _ = b.divmod(q) if q.degree >= 0 else (b, Polynomial.zero())
        c, _ = d.divmod(q) if q.degree >= 0 else (d, Polynomial.zero())
        k += 1
    return out


def poly_from_roots(roots: list[GaussRat]) -> Polynomial:
    p = Polynomial.of(1)
    for r in roots:
        p = p * Polynomial.of(-r, 1)
    return p

"""Rational maps on the Riemann sphere as coprime polynomial pairs.

Evaluation, preimages with local degrees, critical and postcritical data.
Preimages of x are the roots of num - x*den (or den - num/x when |x| > 1,
which keeps coefficients small); the excluded value x = f(inf) is the one
point where that polynomial's degree collapses, and is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ChartFailure, ExcludedPoint
from .gauss import GaussRat
from .polynomials import Polynomial, poly_gcd
from .roots import RootCluster, certified_roots
from .sphere import INF, SpherePoint


@dataclass(frozen=True)
class RationalMapRec:
    """f = num/den with coprime Gaussian-rational polynomials."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise ValueError("denominator is the zero polynomial")
        if self.num.is_zero():
            raise ValueError("numerator is the zero polynomial")
        g = poly_gcd(self.num, self.den)
        if g.degree >= 1:
            raise ValueError("num and den share a root (not coprime)")

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def __call__(self, p: SpherePoint) -> SpherePoint:
        return self.apply(p)

    def apply(self, p: SpherePoint) -> SpherePoint:
        if p.is_infinity:
            dn, dd = self.num.degree, self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return SpherePoint.finite(0)
            return SpherePoint(self.num.leading() / self.den.leading())
        z = p.as_gauss()
        d = self.den(z)
        if d.is_zero():
            return INF
        return SpherePoint(self.num(z) / d)

    def iterate(self, p: SpherePoint, n: int) -> SpherePoint:
        for _ in range(n):
            p = self.apply(p)
        return p

    def orbit(self, p: SpherePoint, n: int) -> list[SpherePoint]:
        """[p, f(p), ..., f^(n-1)(p)] computed exactly."""
        out = [p]
        for _ in range(n - 1):
            out.append(self.apply(out[-1]))
        return out

    def infinity_orbit(self, n: int) -> list[SpherePoint]:
        """[f(inf), ..., f^n(inf)], collapsing once a repeat occurs."""
        out: list[SpherePoint] = []
        seen: set = set()
        x = INF
        for _ in range(n):
            x = self.apply(x)
            if x in seen:
                break
            seen.add(x)
            out.append(x)
        return out


def preimage_polynomial(f: RationalMapRec, x: SpherePoint) -> Polynomial:
    """Degree-deg(f) polynomial whose roots (with multiplicity) are f^-1(x).

    Raises ExcludedPoint when x = f(inf), where the degree collapses.
    """
    if x == f.apply(INF):
        raise ExcludedPoint("x equals f(inf); preimage polynomial degenerates")
    if x.is_infinity:
        g = f.den
    else:
        z = x.as_gauss()
        if z.abs2() <= 1:
            g = f.num - f.den.scale(z)
        else:
            g = f.den - f.num.scale(z.inverse())
    if g.degree != f.degree:
        raise ChartFailure("unexpected degree collapse")  # defensive; unreachable
    return g


def preimages(f: RationalMapRec, x: SpherePoint, l: int) -> list[RootCluster]:
    """Certified preimage discs of x; each multiplicity is a local degree.

    Local degrees sum to deg f.  Chordal disc radii are <= 2^-l.
    """
    return certified_roots(preimage_polynomial(f, x), l)


def wronskian(f: RationalMapRec) -> Polynomial:
    return f.num.derivative() * f.den - f.num * f.den.derivative()


def infinity_critical_multiplicity(f: RationalMapRec) -> int:
    """deg_f(inf) - 1, via the Riemann-Hurwitz count 2d - 2."""
    w = wronskian(f)
    return 2 * f.degree - 2 - w.degree


def critical_points(f: RationalMapRec, l: int) -> list[RootCluster]:
    """Certified critical clusters; multiplicity is the Wronskian order.

    The point at infinity appears as an exact cluster when critical there;
    finite multiplicities plus the infinity multiplicity account for the
    full Wronskian count 2*deg - 2.
    """
    out: list[RootCluster] = []
    w = wronskian(f)
    if w.degree >= 1:
        out.extend(certified_roots(w, l))
    m_inf = infinity_critical_multiplicity(f)
    if m_inf > 0:
        from .sphere import PointBall

        out.append(RootCluster(PointBall(INF, Fraction(0)), m_inf, Fraction(0)))
    return out


def local_degree(f: RationalMapRec, y: SpherePoint) -> int:
    """Exact local degree deg_f(y) at an exact point."""
    x = f.apply(y)
    if not y.is_infinity:
        z = y.as_gauss()
        if x.is_infinity:
            return _root_multiplicity(f.den, z)
        return _root_multiplicity(f.num - f.den.scale(x.as_gauss()), z)
    dn, dd = f.num.degree, f.den.degree
    if x.is_infinity:
        return dn - dd
    d = max(dn, dd)
    num_rev = f.num.reversal(d)
    den_rev = f.den.reversal(d)
    return _root_multiplicity(num_rev - den_rev.scale(x.as_gauss()), GaussRat.of(0))


def _root_multiplicity(p: Polynomial, z: GaussRat) -> int:
    count = 0
    lin = Polynomial.of(-z, 1)
    while not p.is_zero() and p(z).is_zero():
        p, _ = p.divmod(lin)
        count += 1
    return count


@dataclass(frozen=True)
class PostcriticalResult:
    status: str  # "finite" or "undecided"
    points: frozenset[SpherePoint]
    orbits: dict
    periods: dict

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"


def postcritical_orbit(f: RationalMapRec, maxlen: int = 64) -> PostcriticalResult:
    """Exact postcritical set when every critical point is exact and every
    critical orbit closes up within maxlen steps; "undecided" otherwise.

    No floating heuristics: a "finite" verdict is backed by exact equality
    of Gaussian-rational iterates.
    """
    crit: list[SpherePoint] = []
    for cluster in critical_points(f, l=30):
        if cluster.euclid_rad != 0 or cluster.center.rad != 0:
            return PostcriticalResult("undecided", frozenset(), {}, {})
        crit.append(cluster.center.center)
    post: set[SpherePoint] = set()
    orbits: dict = {}
    periods: dict = {}
    for c in crit:
        trail: list[SpherePoint] = []
        index: dict[SpherePoint, int] = {}
        x = f.apply(c)
        while x not in index:
            if len(trail) >= maxlen:
                return PostcriticalResult("undecided", frozenset(), {}, {})
            index[x] = len(trail)
            trail.append(x)
            x = f.apply(x)
        cycle_start = index[x]
        period = len(trail) - cycle_start
        for p in trail[cycle_start:]:
            periods[p] = period
        orbits[c] = tuple(trail)
        post.update(trail)
    return PostcriticalResult("finite", frozenset(post), orbits, periods)


def is_misiurewicz_thurston(f: RationalMapRec, maxlen: int = 64) -> bool | None:
    """True/False when decidable under exact arithmetic, None if undecided."""
    res = postcritical_orbit(f, maxlen)
    if not res.is_finite:
        return None
    # A critical point is periodic iff it reappears in its own forward orbit.
    for c, orbit in res.orbits.items():
        if c in orbit:
            return False
    return True

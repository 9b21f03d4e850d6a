"""Finitely supported rational probability measures and their comparisons.

Weights are exact positive rationals summing to exactly 1 (subprobability
variants relax the total for domination tests).  Atom points are exact
sphere or doubled-triangle points; measures built from certified preimage
trees additionally carry `atom_error`, a bound on how far each stored atom
may sit from the true point it stands for.  Wasserstein enclosures widen
by that displacement, so downstream bounds stay honest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

from .balls import BallReal, ball_sum
from .dyadics import ZERO
from .errors import EvaluationFailure, InexactImage, SpaceMismatch
from .sphere import SpherePoint, chordal
from .transport import TransportResult, min_cost_transport
from .trisphere import TilePoint, dist_tri

SPHERE = "riemann_sphere"
TRI = "tri_sphere"

Point = Union[SpherePoint, TilePoint]


def space_distance(space: str, x: Point, y: Point, prec: int) -> BallReal:
    if space == SPHERE:
        return chordal(x, y, prec)
    if space == TRI:
        return dist_tri(x, y, prec)
    raise SpaceMismatch(f"unknown space {space!r}")


@dataclass(frozen=True)
class FiniteMeasure:
    """Finitely supported measure with exact positive rational weights."""

    space: str
    atoms: tuple[tuple[Point, Fraction], ...]
    atom_error: Fraction = ZERO

    def __post_init__(self) -> None:
        for _, w in self.atoms:
            if w <= 0:
                raise ValueError("atom weights must be positive")
        if self.atom_error < 0:
            raise ValueError("atom_error must be nonnegative")

    @staticmethod
    def from_atoms(space: str, pairs: Iterable[tuple[Point, Fraction]],
                   atom_error: Fraction = ZERO,
                   require_probability: bool = True) -> "FiniteMeasure":
        """Merge coinciding points, sort canonically, verify the total."""
        merged: dict[Point, Fraction] = {}
        for p, w in pairs:
            w = Fraction(w)
            if w == 0:
                continue
            merged[p] = merged.get(p, ZERO) + w
        atoms = tuple(sorted(merged.items(), key=lambda pw: pw[0].sort_key()))
        total = sum(w for _, w in atoms)
        if require_probability and total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        return FiniteMeasure(space, atoms, Fraction(atom_error))

    @staticmethod
    def dirac(space: str, p: Point) -> "FiniteMeasure":
        return FiniteMeasure.from_atoms(space, [(p, Fraction(1))])

    @property
    def total(self) -> Fraction:
        return sum(w for _, w in self.atoms)

    def support(self) -> list[Point]:
        return [p for p, _ in self.atoms]

    def scale(self, q: Fraction) -> "FiniteMeasure":
        return FiniteMeasure(
            self.space, tuple((p, w * q) for p, w in self.atoms), self.atom_error
        )

    def __len__(self) -> int:
        return len(self.atoms)


def integrate(mu: FiniteMeasure, f: Callable[[Point], BallReal], prec: int = 53) -> BallReal:
    """Ball enclosing sum w_i f(p_i); weights are exact so only the
    integrand's enclosure widths enter the radius."""
    terms = []
    for p, w in mu.atoms:
        try:
            val = f(p)
        except Exception as exc:  # surface the atom, keep the cause
            raise EvaluationFailure(f"integrand failed at atom {p!r}: {exc}") from exc
        terms.append(val.scale(w))
    if not terms:
        return BallReal.exact(0)
    return ball_sum(terms)


def pushforward(mu: FiniteMeasure, T: Callable[[Point], Point]) -> FiniteMeasure:
    """Exact image measure; coinciding images merge with exact weight sums.

    The map must return exact points; raise InexactImage inside T when the
    image is not exactly representable (approximate maps belong in
    verification residuals instead).
    """
    pairs = []
    for p, w in mu.atoms:
        q = T(p)
        if q is None:
            raise InexactImage(f"image of atom {p!r} is not exactly representable")
        pairs.append((q, w))
    return FiniteMeasure.from_atoms(
        mu.space, pairs, mu.atom_error, require_probability=(mu.total == 1)
    )


# -- Wasserstein ------------------------------------------------------


@dataclass
class WassersteinResult:
    value: BallReal
    plan: dict[tuple[int, int], Fraction]
    transport: TransportResult
    pinned_cost: list[list[Fraction]]

    def optimality_certificate(self) -> bool:
        return self.transport.verify_optimal(self.pinned_cost)


def wasserstein_detail(mu: FiniteMeasure, nu: FiniteMeasure, prec: int = 30
                       ) -> WassersteinResult:
    """Exact transport optimum over pinned rational costs.

    Costs are chordal (or doubled-triangle) distance balls; the simplex
    runs on their midpoints, so the combinatorial optimum is exact and the
    returned ball widens only by the worst cost radius plus the measures'
    atom displacements.
    """
    if mu.space != nu.space:
        raise SpaceMismatch(f"{mu.space} vs {nu.space}")
    if mu.total != nu.total:
        raise ValueError("wasserstein needs equal total masses")
    cost_balls = [
        [space_distance(mu.space, p, q, prec + 4) for q, _ in nu.atoms]
        for p, _ in mu.atoms
    ]
    pinned = [[b.mid for b in row] for row in cost_balls]
    max_rad = max((b.rad for row in cost_balls for b in row), default=ZERO)
    res = min_cost_transport(
        [w for _, w in mu.atoms], [w for _, w in nu.atoms], pinned
    )
    slack = max_rad * mu.total + mu.atom_error + nu.atom_error
    return WassersteinResult(
        BallReal(res.value, slack), res.plan, res, pinned
    )


def wasserstein(mu: FiniteMeasure, nu: FiniteMeasure, prec: int = 30) -> BallReal:
    """Ball enclosing the transport distance W(mu, nu)."""
    return wasserstein_detail(mu, nu, prec).value


def transport_cost_of_pairing(mu: FiniteMeasure, nu: FiniteMeasure,
                              plan: Iterable[tuple[int, int, Fraction]],
                              prec: int = 30) -> BallReal:
    """Cost of an explicit feasible plan: a certified upper bound on W.

    The plan's marginals are verified exactly; any feasible plan's cost
    dominates the optimum, which is how desk-scale upper bounds for large
    atom counts stay rigorous without solving the full LP.
    """
    if mu.space != nu.space:
        raise SpaceMismatch(f"{mu.space} vs {nu.space}")
    plan = list(plan)
    row_sums: dict[int, Fraction] = {}
    col_sums: dict[int, Fraction] = {}
    for i, j, mass in plan:
        if mass < 0:
            raise ValueError("plan masses must be nonnegative")
        row_sums[i] = row_sums.get(i, ZERO) + mass
        col_sums[j] = col_sums.get(j, ZERO) + mass
    for idx, (_, w) in enumerate(mu.atoms):
        if row_sums.get(idx, ZERO) != w:
            raise ValueError(f"plan row {idx} does not match the source marginal")
    for idx, (_, w) in enumerate(nu.atoms):
        if col_sums.get(idx, ZERO) != w:
            raise ValueError(f"plan column {idx} does not match the target marginal")
    terms = [
        space_distance(mu.space, mu.atoms[i][0], nu.atoms[j][0], prec).scale(mass)
        for i, j, mass in plan
        if mass > 0
    ]
    base = ball_sum(terms) if terms else BallReal.exact(0)
    return base.widen(mu.atom_error + nu.atom_error)


# -- test functions and setwise comparison ------------------------------


@dataclass(frozen=True)
class TestFunction:
    """Hat function: 1 on the closed r-ball, 0 outside the (r+eps)-ball,
    linear in between; (1/eps)-Lipschitz with values in [0, 1]."""

    __test__ = False  # not a pytest collectable despite the name

    space: str
    center: Point
    r: Fraction
    eps: Fraction

    def __post_init__(self) -> None:
        if self.r < 0:
            raise ValueError("hat radius r must be >= 0")
        if self.eps <= 0:
            raise ValueError("hat width eps must be > 0")

    @property
    def lipschitz(self) -> Fraction:
        return 1 / self.eps

    def _shape(self, rho: Fraction) -> Fraction:
        t = 1 - max(ZERO, rho - self.r) / self.eps
        return max(ZERO, min(Fraction(1), t))

    def __call__(self, x: Point, prec: int = 40) -> BallReal:
        rho = space_distance(self.space, self.center, x, prec)
        lo = self._shape(rho.upper())
        hi = self._shape(rho.lower())
        return BallReal.from_endpoints(lo, hi)


@dataclass
class ComparisonResult:
    holds: bool
    witness: TestFunction | None = None
    witness_integrals: tuple[BallReal, BallReal] | None = None


def compare_ge(mu: FiniteMeasure, nu: FiniteMeasure,
               family: list[TestFunction], tol: Fraction = Fraction(1, 1024),
               prec: int = 40) -> ComparisonResult:
    """Setwise domination test: violated only on a certified witness with
    <mu, tau+> < <nu, tau+> - tol; holds otherwise."""
    for tau in family:
        a = integrate(mu, lambda p: tau(p, prec), prec)
        b = integrate(nu, lambda p: tau(p, prec), prec)
        if a.upper() < b.lower() - tol:
            return ComparisonResult(False, tau, (a, b))
    return ComparisonResult(True)

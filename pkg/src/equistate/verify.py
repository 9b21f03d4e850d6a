"""Equilibrium-state verification: Jacobian criteria, membership residuals,
tangent-functional certificates, and invariance residuals.

Finitely supported approximants never satisfy the exact invariance and
Jacobian identities, so every check returns a signed residual ball
together with the slack the test family is entitled to (Lipschitz constant
times a caller-quantified mesh).  "Pass" always means: residual below
slack plus tolerance; a certified violation means the residual's lower
bound clears the slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .balls import BallReal, ball_exp, ball_sum, log_point
from .dyadics import ZERO, sqrt_upper
from .errors import (
    ExcludedPoint,
    NonPositiveJacobian,
    NotInjectiveOnPatch,
    NotInjectiveOnSupport,
)
from .measures import (
    SPHERE,
    TRI,
    FiniteMeasure,
    Point,
    TestFunction,
    integrate,
    pushforward,
    wasserstein,
)
from .potentials import Potential, sup_bound
from .ratmap import RationalMapRec, preimages
from .sphere import SpherePoint, chordal_sq
from .thurston import SubdivisionMap, tile_complex, _solve_barycentric, _pullback
from .trisphere import TilePoint, dist2_tri
from .balls import DirectedReal

MapLike = Union[RationalMapRec, SubdivisionMap, Callable[[Point], Point]]


# -- patches -----------------------------------------------------------


@dataclass(frozen=True)
class BallPatch:
    """Open metric ball used as an admissible (injectivity) patch."""

    space: str
    center: Point
    radius: Fraction

    def _dist2(self, x: Point) -> Fraction:
        if self.space == SPHERE:
            return chordal_sq(self.center, x)
        return dist2_tri(self.center, x)

    def contains_point(self, x: Point) -> bool:
        return self._dist2(x) < self.radius * self.radius

    def contains_disc(self, x: Point, disc_rad: Fraction, bits: int = 40) -> bool:
        """Certified: the whole disc around x lies inside the patch."""
        if disc_rad >= self.radius:
            return False
        d = sqrt_upper(self._dist2(x), bits)
        return d + disc_rad < self.radius

    def excludes_disc(self, x: Point, disc_rad: Fraction) -> bool:
        """Certified: the disc around x misses the patch entirely."""
        slack = self.radius + disc_rad
        return self._dist2(x) > slack * slack


@dataclass
class PatchSystem:
    """Open patches on which the map is injective, plus a finite excluded
    set (e.g. the preimage of the postcritical set)."""

    space: str
    patches: list[BallPatch]
    excluded: list[Point] = field(default_factory=list)

    def classify_point(self, x: Point) -> list[int]:
        return [k for k, p in enumerate(self.patches) if p.contains_point(x)]

    def near_excluded(self, x: Point, disc_rad: Fraction) -> bool:
        for e in self.excluded:
            if self.space == SPHERE:
                d2 = chordal_sq(e, x)
            else:
                d2 = dist2_tri(e, x)
            if d2 <= disc_rad * disc_rad:
                return True
        return False

    def validate_injectivity(self, f: MapLike, samples_per_patch: int = 12) -> bool:
        """Sample-grid injectivity check (exact comparisons on exact points).

        A failure is definitive; a pass is desk-scale evidence, not proof.
        """
        apply = _as_callable(f)
        for patch in self.patches:
            pts = _sample_points(patch, samples_per_patch)
            images = [apply(p) for p in pts]
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if pts[i] != pts[j] and images[i] == images[j]:
                        return False
        return True


def _as_callable(f: MapLike) -> Callable[[Point], Point]:
    if isinstance(f, RationalMapRec):
        return f.apply
    return f


def _sample_points(patch: BallPatch, count: int) -> list[Point]:
    if patch.space != SPHERE or patch.center.is_infinity:
        return [patch.center]
    z = patch.center.as_gauss()
    out = [patch.center]
    k = 1
    # Dyadic offsets shrinking into the patch; sigma <= 2|dz| keeps them in.
    step = patch.radius / 4
    offsets = [(step, ZERO), (ZERO, step), (-step, ZERO), (ZERO, -step),
               (step, step), (-step, -step), (step / 2, -step / 2),
               (-step / 4, step / 4)]
    from .gauss import GaussRat

    for dx, dy in offsets:
        if len(out) >= count:
            break
        cand = SpherePoint(GaussRat(z.re + dx / 2, z.im + dy / 2))
        if patch.contains_point(cand):
            out.append(cand)
        k += 1
    return out


def standard_sphere_patches(f: RationalMapRec, anchors: list[SpherePoint],
                            radius: Fraction = Fraction(1, 2)) -> PatchSystem:
    """Balls around the given anchor points, with the excluded set
    f^-1(post f) when the postcritical data is exactly available."""
    from .ratmap import postcritical_orbit

    excluded: list[Point] = []
    res = postcritical_orbit(f)
    if res.is_finite:
        for p in res.points:
            try:
                for cl in preimages(f, p, 30):
                    if cl.euclid_rad == 0:
                        excluded.append(cl.center.center)
            except ExcludedPoint:
                excluded.append(p)
    patches = [BallPatch(SPHERE, a, radius) for a in anchors]
    return PatchSystem(SPHERE, patches, excluded)


# -- Jacobian specifications -------------------------------------------


@dataclass(frozen=True)
class JacobianSpec:
    """Either a constant, or exp(P - phi(x) + h(T x) - h(x)) on the patches."""

    kind: str  # "constant" | "potential_form"
    constant: Fraction | None = None
    pressure_value: BallReal | None = None
    phi: Potential | None = None
    h: Potential | None = None

    @staticmethod
    def const(d: Fraction | int) -> "JacobianSpec":
        d = Fraction(d)
        if d <= 0:
            raise NonPositiveJacobian("constant Jacobian must be positive")
        return JacobianSpec("constant", constant=d)

    @staticmethod
    def potential_form(pressure_value: BallReal, phi: Potential, h: Potential
                       ) -> "JacobianSpec":
        return JacobianSpec("potential_form", pressure_value=pressure_value,
                            phi=phi, h=h)

    def log_at(self, y: Point, image: Point, disp: Fraction = ZERO,
               prec: int = 40) -> BallReal:
        """log J(y), given the exact image T(y) (=: image)."""
        if self.kind == "constant":
            return log_point(self.constant, prec)
        val = self.pressure_value - self.phi.evaluate_with_displacement(y, disp, prec)
        val = val + self.h.evaluate(image, prec) - self.h.evaluate_with_displacement(
            y, disp, prec
        )
        return val

    def value_at(self, y: Point, image: Point, disp: Fraction = ZERO,
                 prec: int = 40) -> BallReal:
        if self.kind == "constant":
            return BallReal.exact(self.constant)
        return ball_exp(self.log_at(y, image, disp, prec), prec)

    def inverse_at(self, y: Point, image: Point, disp: Fraction = ZERO,
                   prec: int = 40) -> BallReal:
        if self.kind == "constant":
            return BallReal.exact(Fraction(1) / self.constant)
        return ball_exp(-self.log_at(y, image, disp, prec), prec)

    def sup_over_patches(self, prec: int = 20) -> Fraction:
        """Crude upper bound on J, for slack budgeting."""
        if self.kind == "constant":
            return self.constant
        exponent = self.pressure_value.upper() + sup_bound(self.phi) \
            + 2 * sup_bound(self.h)
        return ball_exp(BallReal.exact(exponent), prec).upper()


# -- preimage enumeration across map kinds ------------------------------


@dataclass
class PreimagePoint:
    point: Point
    disc_rad: Fraction  # chordal/metric displacement bound (0 means exact)
    local_degree: int


def enumerate_preimages(f: MapLike, x: Point, l: int = 40) -> list[PreimagePoint]:
    """All preimages of x with local degrees; exact for subdivision maps,
    certified discs for rational maps."""
    if isinstance(f, RationalMapRec):
        return [
            PreimagePoint(c.center.center, c.center.rad, c.multiplicity)
            for c in preimages(f, x, l)
        ]
    if isinstance(f, SubdivisionMap):
        from .trisphere import tile_point

        ones = tile_complex(f.rule, 1)
        # One preimage per level-1 tile mapping onto x's face (its chart
        # pullback); the local degree at y is the number of such tiles
        # whose closure holds y, since all charts agree at shared points.
        matching = [t for t in ones.tiles if t.target_face == x.face]
        ys: list[TilePoint] = []
        for t in matching:
            y = tile_point(t.face, *_pullback(t, x.coords))
            if y not in ys:
                ys.append(y)
        return [
            PreimagePoint(
                y, ZERO, sum(1 for t in matching if _contains_exact(t, y))
            )
            for y in ys
        ]
    raise TypeError("unsupported map type for preimage enumeration")


def _contains_exact(tile, y: TilePoint) -> bool:
    if tile.face != y.face and not y.on_boundary:
        return False
    lam = _solve_barycentric(tile.vert_coords(), y.coords)
    return all(l >= 0 for l in lam)


# -- checks -------------------------------------------------------------


def jacobian_unitarity(f: MapLike, J: JacobianSpec, x: Point,
                       patches: PatchSystem, prec: int = 40) -> BallReal:
    """Residual | sum over f^-1(x) in the patch union of 1/J(y)  -  1 |.

    Preimages whose certified discs straddle a patch boundary contribute
    an honest [0, value] uncertainty instead of a guess.
    """
    pres = enumerate_preimages(f, x, prec + 8)
    certain = []
    ambiguous = []
    for p in pres:
        if patches.near_excluded(p.point, p.disc_rad):
            raise ExcludedPoint(f"preimage {p.point!r} meets the excluded set")
        inside = any(
            patch.contains_disc(p.point, p.disc_rad) for patch in patches.patches
        )
        outside = all(
            patch.excludes_disc(p.point, p.disc_rad) for patch in patches.patches
        )
        inv = J.inverse_at(p.point, x, p.disc_rad, prec).scale(p.local_degree)
        if inside:
            certain.append(inv)
        elif not outside:
            ambiguous.append(inv)
    base = ball_sum(certain) if certain else BallReal.exact(0)
    if ambiguous:
        amb = ball_sum(ambiguous)
        lo = base - 1
        hi = base + amb - 1
        enclosing = BallReal.from_endpoints(
            min(lo.lower(), hi.lower()), max(lo.upper(), hi.upper())
        )
        return enclosing.abs()
    return (base - 1).abs()


def atomic_jacobian(mu: FiniteMeasure, T: MapLike,
                    patches: PatchSystem | None = None) -> dict[Point, Fraction]:
    """J(a) = mu({T a}) / mu({a}) on atoms; requires exact images and
    injectivity of T on the support (within each patch when given)."""
    apply = _as_callable(T)
    weights = dict(mu.atoms)
    images = {a: apply(a) for a, _ in mu.atoms}
    if patches is not None:
        for a in images:
            if not patches.classify_point(a):
                raise NotInjectiveOnSupport(
                    f"atom {a!r} lies outside every injectivity patch"
                )
        for k, patch in enumerate(patches.patches):
            members = [a for a in images if patch.contains_point(a)]
            if len({images[a] for a in members}) != len(members):
                raise NotInjectiveOnSupport(f"atoms collide within patch {k}")
    else:
        if len(set(images.values())) != len(images):
            raise NotInjectiveOnSupport("atom images collide")
    return {a: weights.get(images[a], ZERO) / w for a, w in mu.atoms}


def rokhlin_lower_bound(mu: FiniteMeasure,
                        J: JacobianSpec | dict[Point, Fraction],
                        T: MapLike | None = None, prec: int = 40) -> BallReal:
    """Enclosure of the entropy lower bound integral log J d mu."""
    if isinstance(J, dict):
        terms = []
        for a, w in mu.atoms:
            val = J.get(a, ZERO)
            if val <= 0:
                raise NonPositiveJacobian(f"J({a!r}) = {val} is not positive")
            terms.append(log_point(val, prec).scale(w))
        return ball_sum(terms)
    if J.kind == "constant":
        return log_point(J.constant, prec)
    if T is None:
        raise ValueError("potential-form Jacobian needs the map for h(Tx)")
    apply = _as_callable(T)
    return integrate(
        mu, lambda a: J.log_at(a, apply(a), mu.atom_error, prec), prec
    )


@dataclass
class ResidualEntry:
    patch: int
    test: int
    residual: BallReal
    slack: Fraction


def membership_residual(mu: FiniteMeasure, T: MapLike, patches: PatchSystem,
                        J: JacobianSpec, tests: list[TestFunction],
                        mesh: Fraction = ZERO, prec: int = 40
                        ) -> list[ResidualEntry]:
    """Per-(patch, test) residual of the prescribed-Jacobian membership
    functionals:

        residual =  integral of J . tau+ . 1_patch  d mu
                  - integral of sup {tau+(y) : y in T^-1(x), y in patch} d mu(x).

    A residual certifiably above the entry's slack rejects mu from the
    prescribed-Jacobian class at this scale.  slack = sup J * Lip(tau) *
    mesh, where mesh is the caller's transport bound between mu and its
    one-step refinement (0 when no refinement argument is intended).
    """
    entries: list[ResidualEntry] = []
    sup_j = J.sup_over_patches()
    pre_cache: dict[Point, list[PreimagePoint]] = {}
    for a, _ in mu.atoms:
        pre_cache[a] = enumerate_preimages(T, a, prec + 8)
    for k, patch in enumerate(patches.patches):
        for t_idx, tau in enumerate(tests):
            v_terms = []
            w_terms = []
            for a, w in mu.atoms:
                # V side: atoms of mu inside the patch.
                if patch.contains_point(a):
                    v_terms.append(
                        (tau(a, prec) * J.value_at(a, _as_callable(T)(a),
                                                   mu.atom_error, prec)).scale(w)
                    )
                # W side: the (at most one) preimage inside the patch.
                inside: list[BallReal] = []
                ambiguous: list[BallReal] = []
                for p in pre_cache[a]:
                    if patch.contains_disc(p.point, p.disc_rad):
                        inside.append(tau(p.point, prec).widen(
                            tau.lipschitz * p.disc_rad))
                    elif not patch.excludes_disc(p.point, p.disc_rad):
                        ambiguous.append(tau(p.point, prec).widen(
                            tau.lipschitz * p.disc_rad))
                if len(inside) > 1:
                    raise NotInjectiveOnPatch(
                        f"patch {k} holds {len(inside)} preimages of one point"
                    )
                if inside or ambiguous:
                    candidates = inside + ambiguous
                    hi = max(c.upper() for c in candidates)
                    lo = max(c.lower() for c in inside) if inside else ZERO
                    w_terms.append(BallReal.from_endpoints(min(lo, hi), hi).scale(w))
            v = ball_sum(v_terms) if v_terms else BallReal.exact(0)
            wv = ball_sum(w_terms) if w_terms else BallReal.exact(0)
            slack = sup_j * tau.lipschitz * mesh \
                + sup_j * tau.lipschitz * mu.atom_error * 2
            entries.append(ResidualEntry(k, t_idx, v - wv, slack))
    return entries


def membership_verdict(entries: list[ResidualEntry],
                       tol: Fraction = Fraction(1, 1 << 10)) -> bool:
    """True (member at this scale) unless some residual certifiably
    exceeds its slack plus the tolerance."""
    return all(e.residual.lower() <= e.slack + tol for e in entries)


@dataclass
class TangentResult:
    passed: bool
    witness_index: int | None
    gap: BallReal
    gaps: list[BallReal]


def tangent_certificate(nu: FiniteMeasure, phi: Potential,
                        witnesses: list[tuple[Potential, DirectedReal]],
                        p_lower: DirectedReal, tol: Fraction = Fraction(1, 1 << 10),
                        prec: int = 40) -> TangentResult:
    """Tangency test at phi: every witness psi with upper pressure bound P
    must satisfy  P - <nu, psi> + <nu, phi>  >=  p_lower - tol.

    Upper bounds use the witnesses' current terms; enlarging the witness
    family can only lower the minimum, so a fail is monotone under
    refinement.
    """
    if p_lower.direction != "lower":
        raise ValueError("p_lower must be a lower directed real")
    phi_int = integrate(nu, lambda p: phi.evaluate(p, prec), prec)
    gaps: list[BallReal] = []
    worst: tuple[Fraction, int] | None = None
    for idx, (psi, p_upper) in enumerate(witnesses):
        if p_upper.direction != "upper":
            raise ValueError("witness pressures must be upper directed reals")
        psi_int = integrate(nu, lambda p: psi.evaluate(p, prec), prec)
        gap = BallReal.exact(p_upper.current) - psi_int + phi_int \
            - BallReal.exact(p_lower.current)
        gaps.append(gap)
        if worst is None or gap.lower() < worst[0]:
            worst = (gap.lower(), idx)
    if not gaps:
        return TangentResult(True, None, BallReal.exact(0), [])
    lo, idx = worst
    if lo >= -tol:
        return TangentResult(True, None, gaps[idx], gaps)
    return TangentResult(False, idx, gaps[idx], gaps)


def invariance_residual(mu: FiniteMeasure, T: MapLike, prec: int = 30) -> BallReal:
    """W(mu, T_* mu): how far mu is from exact invariance, in transport
    distance.  Requires exact images (InexactImage otherwise)."""
    return wasserstein(mu, pushforward(mu, _as_callable(T)), prec)

"""Transfer-operator iterates, topological pressure, backward-orbit measures.

The central object is a certified preimage tree: level k holds the
f^-k-preimages of the anchor as exact stored points, each with a bound on
its Euclidean (and chordal) distance to the true preimage it stands for.
Displacement propagates soundly through each solve: the stored parent p~
perturbs the preimage polynomial g* = num - p*.den by at most
delta*|den|, so the Newton-style residual bound evaluated with that
perturbation encloses the true child.  Critical branching (a multiple
preimage) is only accepted on exactly stored parents, where the certified
cluster radius itself is the displacement.

Pressure follows the iterate-and-log recipe: pick N beyond 2^(n+1)*C0*R,
take an anchor off the forward orbit of infinity, and return
(1/N) log L_phi^N(1)(anchor) with the truncation allowance C0*R/N added
to the radius.  With a constant potential the truncation term vanishes
and the enclosure is as tight as the evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .balls import BallReal, ball_exp, ball_log, ball_sum
from .dyadics import ZERO, sqrt_lower, sqrt_upper
from .errors import ExcludedAnchor, ExcludedPoint, PrecisionExhausted
from .gauss import GaussRat
from .measures import SPHERE, FiniteMeasure
from .polynomials import Polynomial
from .potentials import Potential
from .ratmap import RationalMapRec, preimage_polynomial
from .roots import certified_roots
from .sphere import INF, SpherePoint, chordal_disc_radius, chordal_sq, ideal_enumerate

_MAX_TREE_LEAVES = 1 << 19


@dataclass
class TreeNode:
    point: SpherePoint
    euclid_err: Fraction
    chordal_err: Fraction
    local_degree: int
    degree_product: int
    parent: int | None
    phi_path: BallReal  # S_k(phi) along the orbit from this node up to depth 1


@dataclass
class PreimageTree:
    map: RationalMapRec
    levels: list[list[TreeNode]]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def leaves(self) -> list[TreeNode]:
        return self.levels[-1]

    def max_leaf_displacement(self) -> Fraction:
        return max((n.chordal_err for n in self.leaves()), default=ZERO)


def _perturbed_child_displacement(g: Polynomial, den: Polynomial, z: GaussRat,
                                  delta: Fraction, bits: int) -> Fraction | None:
    """Distance bound from z to the true simple preimage it represents.

    g is the preimage polynomial of the stored parent; the true parent
    moves the polynomial by at most delta * |den|.  None means the bound
    degenerated and the caller should retry at higher precision.
    """
    d = g.degree
    g_at = sqrt_upper(g(z).abs2(), bits)
    dg_at = sqrt_lower(g.derivative()(z).abs2(), bits)
    den_at = sqrt_upper(den(z).abs2(), bits)
    dden_at = sqrt_upper(den.derivative()(z).abs2(), bits)
    denom = dg_at - delta * dden_at
    if denom <= 0:
        return None
    return d * (g_at + delta * den_at) / denom


def build_preimage_tree(f: RationalMapRec, x: SpherePoint, depth: int, l: int,
                        phi: Potential | None = None, eval_prec: int = 60) -> PreimageTree:
    """Certified depth-level preimage tree of x under f.

    Requires x not in {f^i(inf) : 1 <= i <= depth}.  Stored points are
    exact; euclid_err/chordal_err bound their distance to the true
    preimages; phi sums accumulate along paths when a potential is given.
    """
    if f.degree ** depth > _MAX_TREE_LEAVES:
        raise PrecisionExhausted(
            f"preimage tree of depth {depth} for degree {f.degree} exceeds the leaf cap"
        )
    excluded = f.infinity_orbit(depth)
    if x in excluded:
        raise ExcludedPoint(f"anchor {x!r} lies on the forward orbit of infinity")
    f_of_inf = f.apply(INF)
    zero_phi = phi is None or phi.is_zero()
    root = TreeNode(x, ZERO, ZERO, 1, 1, None, BallReal.exact(0))
    levels = [[root]]
    for _level in range(depth):
        current = levels[-1]
        children: list[TreeNode] = []
        for idx, node in enumerate(current):
            if node.point == f_of_inf:
                # The true node differs from f(inf); the stored rounding
                # collided with the excluded value.  Needs more precision.
                raise PrecisionExhausted("stored tree node collided with f(inf)")
            g = preimage_polynomial(f, node.point)
            clusters = certified_roots(g, l)
            for cl in clusters:
                z = cl.midpoint
                if cl.multiplicity > 1 and node.euclid_err != 0:
                    raise PrecisionExhausted(
                        "critical branching below an inexactly stored node"
                    )
                if cl.multiplicity > 1 or (node.euclid_err == 0 and cl.euclid_rad == 0):
                    delta = cl.euclid_rad
                else:
                    delta = _perturbed_child_displacement(
                        g, f.den, z, node.euclid_err, l + 8
                    )
                    if delta is None:
                        raise PrecisionExhausted("displacement bound degenerated")
                    delta = max(delta, cl.euclid_rad)
                chordal_err = chordal_disc_radius(z, delta, l + 4)
                point = SpherePoint(z)
                if zero_phi:
                    phi_here = node.phi_path
                else:
                    phi_here = node.phi_path + phi.evaluate_with_displacement(
                        point, chordal_err, eval_prec
                    )
                children.append(TreeNode(
                    point, delta, chordal_err, cl.multiplicity,
                    node.degree_product * cl.multiplicity, idx, phi_here,
                ))
        levels.append(children)
    return PreimageTree(f, levels)


def birkhoff_sum(f: RationalMapRec, phi: Potential, x: SpherePoint, n: int,
                 prec: int = 40) -> BallReal:
    """Enclosure of phi(x) + phi(f x) + ... + phi(f^(n-1) x); zero for n = 0."""
    if n == 0:
        return BallReal.exact(0)
    return ball_sum(phi.evaluate(p, prec + n.bit_length() + 1) for p in f.orbit(x, n))


def ruelle_apply(f: RationalMapRec, phi: Potential | None, u: Potential | None,
                 x: SpherePoint, m: int, n: int = 30) -> BallReal:
    """Enclosure of L_phi^m(u)(x) with radius <= 2^-n.

    L_phi^m(u)(x) = sum over f^-m-preimages y (with local degrees) of
    deg(y) * u(y) * exp(S_m phi(y)).  u = None means the constant 1.
    Requires x outside {f^i(inf) : 1 <= i <= m}.
    """
    if m == 0:
        base = u.evaluate(x, n + 2) if u is not None else BallReal.exact(1)
        return base
    target = Fraction(1, 1 << n)
    l = n + 8 + 2 * m
    eval_prec = n + 10 + m + (f.degree ** m).bit_length()
    for _attempt in range(8):
        try:
            tree = build_preimage_tree(f, x, m, l, phi, eval_prec)
        except PrecisionExhausted:
            l *= 2
            continue
        terms = []
        for leaf in tree.leaves():
            weight = ball_exp(leaf.phi_path, eval_prec)
            if u is not None:
                weight = weight * u.evaluate_with_displacement(
                    leaf.point, leaf.chordal_err, eval_prec
                )
            terms.append(weight.scale(leaf.degree_product))
        total = ball_sum(terms)
        if total.rad <= target:
            return total
        l *= 2
        eval_prec *= 2
    raise PrecisionExhausted(f"ruelle_apply at 2^-{n}")


@dataclass
class PressureResult:
    value: BallReal
    n_bits: int
    N_used: int
    anchor: SpherePoint
    c0_used: Fraction | None
    R_used: Fraction | None
    mode: str  # "certified" | "empirical"


def _select_anchor(f: RationalMapRec, N: int, clearance: Fraction,
                   search_limit: int = 20000) -> SpherePoint:
    """First enumerated ideal point with chordal clearance from the exact
    forward orbit of infinity."""
    orbit = f.infinity_orbit(N)
    c2 = clearance * clearance
    for k in range(1, search_limit + 1):
        s = ideal_enumerate(k)
        if all(chordal_sq(s, o) > c2 for o in orbit):
            return s
    raise ExcludedAnchor("no ideal anchor clears the forward orbit of infinity")


def pressure(f: RationalMapRec, phi: Potential, n: int,
             c0: Fraction | None = None, R: Fraction | None = None,
             alpha: Fraction = Fraction(1), mode: str = "certified",
             anchor_clearance: Fraction = Fraction(1, 1 << 10),
             max_depth: int = 18) -> PressureResult:
    """Topological pressure P(f, phi) to within 2^-n.

    Certified mode needs c0 (the iterate-distortion constant for (f, alpha))
    and R >= the alpha-Hoelder seminorm of phi in the metric c0 refers to;
    it picks N > 2^(n+1)*c0*R, so the truncation error C0*R/N stays below
    2^-(n+1), and adds it to the radius.  The exponential preimage tree
    caps N: if the required N is out of reach the error says exactly what
    was needed, rather than degrading the bound.

    Empirical mode iterates N until successive estimates agree to
    2^-(n+2); the result is labeled and NOT certified.
    """
    if mode == "certified":
        if c0 is None or R is None:
            raise ValueError("certified mode requires c0 and R")
        if c0 < 0 or R < 0:
            raise ValueError("c0 and R must be nonnegative")
        N = int(Fraction(2) ** (n + 1) * c0 * R) + 1
        if N > max_depth or f.degree ** N > _MAX_TREE_LEAVES:
            raise PrecisionExhausted(
                f"certified pressure needs N = {N} transfer-operator steps; "
                f"the degree-{f.degree} preimage tree is out of desk range"
            )
        anchor = _select_anchor(f, N, anchor_clearance)
        eval_bits = n + 2
        for _ in range(6):
            big = ruelle_apply(f, phi, None, anchor, N, eval_bits + N.bit_length())
            logball = ball_log(big, eval_bits + N.bit_length() + 2)
            val = BallReal(logball.mid / N, logball.rad / N + c0 * R / Fraction(N))
            if val.rad <= Fraction(1, 1 << n):
                return PressureResult(val, n, N, anchor, c0, R, "certified")
            eval_bits *= 2
        raise PrecisionExhausted("pressure evaluation did not reach 2^-n")
    if mode != "empirical":
        raise ValueError("mode must be 'certified' or 'empirical'")
    agree = Fraction(1, 1 << (n + 2))
    prev: BallReal | None = None
    prev_N = 0
    for N in range(1, max_depth + 1):
        if f.degree ** N > _MAX_TREE_LEAVES:
            break
        anchor = _select_anchor(f, N, anchor_clearance)
        big = ruelle_apply(f, phi, None, anchor, N, n + 6 + N.bit_length())
        logball = ball_log(big, n + 8 + N.bit_length())
        cur = BallReal(logball.mid / N, logball.rad / N)
        if prev is not None and abs(cur.mid - prev.mid) <= agree:
            return PressureResult(
                BallReal(cur.mid, cur.rad + agree), n, N, anchor, None, None,
                "empirical",
            )
        prev, prev_N = cur, N
    raise PrecisionExhausted(
        f"empirical pressure estimates did not stabilize by N = {prev_N}"
    )


def backward_orbit_measure(f: RationalMapRec, phi: Potential | None,
                           x: SpherePoint, depth: int, l: int | None = None
                           ) -> FiniteMeasure:
    """Weighted distribution of the depth-level backward orbit of x.

    Atoms are the stored preimage points; the weight of y is proportional
    to deg(y) * exp(S_depth phi(y)) and weights renormalize to sum to
    exactly 1.  With phi = 0 (or None) the weights are exact rationals;
    otherwise the rounding, together with the geometric displacement, is
    folded into the measure's atom_error (a Wasserstein discrepancy bound
    against the ideal backward-orbit measure).
    """
    if l is None:
        l = 40 + 2 * depth
    zero_phi = phi is None or (phi is not None and phi.is_zero())
    eval_prec = l + 10
    tree = build_preimage_tree(f, x, depth, l, None if zero_phi else phi, eval_prec)
    leaves = tree.leaves()
    disp = tree.max_leaf_displacement()
    if zero_phi:
        d_to_m = Fraction(1, f.degree ** depth)
        atoms = [(leaf.point, leaf.degree_product * d_to_m) for leaf in leaves]
        return FiniteMeasure.from_atoms(SPHERE, atoms, atom_error=disp)
    raw = [
        ball_exp(leaf.phi_path, eval_prec).scale(leaf.degree_product)
        for leaf in leaves
    ]
    total_mid = sum(b.mid for b in raw)
    total_ball = ball_sum(raw)
    if total_ball.lower() <= 0:
        raise PrecisionExhausted("backward-orbit weights not certifiably positive")
    atoms = [(leaf.point, b.mid / total_mid) for leaf, b in zip(leaves, raw)]
    tv_bound = 2 * sum(b.rad for b in raw) / total_ball.lower()
    return FiniteMeasure.from_atoms(SPHERE, atoms, atom_error=disp + 2 * tv_bound)

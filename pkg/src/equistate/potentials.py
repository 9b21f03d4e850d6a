"""Potentials: the algebra generated by distance-to-ideal-point functions.

An expression tree over {constant, basis, sum, product, rational scaling}
where each basis element is x |-> sigma(x, s) for an exact point s.  Every
potential expands to a normal form sum_t q_t * prod_j basis_{t,j}, from
which an explicit Lipschitz bound follows: a product of m basis factors
(each bounded by 2 and 1-Lipschitz) is 2^(m-1) * m Lipschitz, so
F = sum_t 2^(m_t - 1) * m_t * |q_t| dominates the sigma-Hoelder seminorm.
Pure constant terms contribute zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .balls import BallReal, ball_sum
from .dyadics import ZERO, format_rational
from .errors import ParseError
from .sphere import SpherePoint, chordal, sphere_point_from_json, sphere_point_to_json

NormalTerm = tuple[Fraction, tuple[SpherePoint, ...]]


@dataclass(frozen=True)
class Potential:
    """Expression node; use the module constructors below."""

    op: str  # "const" | "basis" | "sum" | "prod" | "scale"
    value: Fraction | None = None
    point: SpherePoint | None = None
    children: tuple["Potential", ...] = ()

    # -- evaluation ----------------------------------------------------

    def evaluate(self, x: SpherePoint, prec: int = 40) -> BallReal:
        if self.op == "const":
            return BallReal.exact(self.value)
        if self.op == "basis":
            return chordal(x, self.point, prec)
        if self.op == "sum":
            return ball_sum(c.evaluate(x, prec + 2) for c in self.children)
        if self.op == "prod":
            out = BallReal.exact(1)
            for c in self.children:
                out = out * c.evaluate(x, prec + 2)
            return out
        if self.op == "scale":
            return self.children[0].evaluate(x, prec).scale(self.value)
        raise ValueError(f"unknown op {self.op!r}")

    def evaluate_with_displacement(self, x: SpherePoint, disp: Fraction,
                                   prec: int = 40) -> BallReal:
        """Enclosure of the value at any point within chordal distance
        `disp` of x, via the Lipschitz bound."""
        base = self.evaluate(x, prec)
        if disp == 0:
            return base
        return base.widen(holder_bound(self) * disp)

    # -- structure -----------------------------------------------------

    def normal_form(self) -> list[NormalTerm]:
        """Expanded sum-of-products with like terms combined."""
        terms = self._expand()
        combined: dict[tuple, Fraction] = {}
        for q, basis in terms:
            key = tuple(sorted(basis, key=lambda s: s.sort_key()))
            combined[key] = combined.get(key, ZERO) + q
        out = [(q, key) for key, q in sorted(combined.items(),
                                             key=lambda kv: (len(kv[0]),))
               if q != 0]
        return out

    def _expand(self) -> list[NormalTerm]:
        if self.op == "const":
            return [(self.value, ())] if self.value != 0 else []
        if self.op == "basis":
            return [(Fraction(1), (self.point,))]
        if self.op == "sum":
            out: list[NormalTerm] = []
            for c in self.children:
                out.extend(c._expand())
            return out
        if self.op == "scale":
            if self.value == 0:
                return []
            return [(q * self.value, b) for q, b in self.children[0]._expand()]
        if self.op == "prod":
            acc: list[NormalTerm] = [(Fraction(1), ())]
            for c in self.children:
                child_terms = c._expand()
                acc = [(q1 * q2, b1 + b2) for q1, b1 in acc for q2, b2 in child_terms]
            return acc
        raise ValueError(f"unknown op {self.op!r}")

    def is_zero(self) -> bool:
        return not self.normal_form()

    def constant_value(self) -> Fraction | None:
        """The exact constant this potential equals, or None if nonconstant."""
        nf = self.normal_form()
        if not nf:
            return ZERO
        if len(nf) == 1 and not nf[0][1]:
            return nf[0][0]
        if all(not b for _, b in nf):
            return sum(q for q, _ in nf)
        return None


def const(q: Fraction | int) -> Potential:
    return Potential("const", value=Fraction(q))


def basis(s: SpherePoint) -> Potential:
    if s.is_infinity:
        # sigma(x, inf) is a fine 1-Lipschitz function; allow it.
        pass
    return Potential("basis", point=s)


def psum(*children: Potential) -> Potential:
    return Potential("sum", children=tuple(children))


def pprod(*children: Potential) -> Potential:
    return Potential("prod", children=tuple(children))


def scale(q: Fraction | int, child: Potential) -> Potential:
    return Potential("scale", value=Fraction(q), children=(child,))


def holder_bound(phi: Potential) -> Fraction:
    """Explicit bound F >= |phi|_{1,sigma} from the normal form."""
    total = ZERO
    for q, basis_pts in phi.normal_form():
        m = len(basis_pts)
        if m == 0:
            continue  # constants have zero variation
        total += Fraction(2) ** (m - 1) * m * abs(q)
    return total


def sup_bound(phi: Potential) -> Fraction:
    """Bound on sup |phi|: each basis factor is at most 2."""
    total = ZERO
    for q, basis_pts in phi.normal_form():
        total += abs(q) * Fraction(2) ** len(basis_pts)
    return total


# -- serialization -----------------------------------------------------


def potential_to_json(phi: Potential):
    if phi.op == "const":
        return {"op": "const", "value": format_rational(phi.value)}
    if phi.op == "basis":
        return {"op": "basis", "point": sphere_point_to_json(phi.point)}
    if phi.op == "scale":
        return {"op": "scale", "value": format_rational(phi.value),
                "child": potential_to_json(phi.children[0])}
    return {"op": phi.op, "children": [potential_to_json(c) for c in phi.children]}


def potential_from_json(obj) -> Potential:
    try:
        op = obj["op"]
        if op == "const":
            return const(Fraction(obj["value"]))
        if op == "basis":
            return basis(sphere_point_from_json(obj["point"]))
        if op == "scale":
            return scale(Fraction(obj["value"]), potential_from_json(obj["child"]))
        if op in ("sum", "prod"):
            children = tuple(potential_from_json(c) for c in obj["children"])
            return Potential(op, children=children)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad potential: {obj!r}") from exc
    raise ParseError(f"bad potential op: {obj!r}")

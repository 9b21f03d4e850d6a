"""JSON/CSV interchange and textual parsers for maps, points, measures.

JSON carries every rational as an exact "p/q" string so measures and maps
round-trip with no loss; CSV is for plot data only and uses decimals.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .dyadics import format_rational
from .errors import ParseError
from .gauss import GaussRat, format_gauss, parse_gauss
from .measures import SPHERE, TRI, FiniteMeasure
from .polynomials import Polynomial, poly_gcd
from .potentials import Potential, potential_from_json
from .ratmap import RationalMapRec
from .sphere import INF, SpherePoint, sphere_point_from_json, sphere_point_to_json
from .trisphere import TilePoint, tile_point_from_json, tile_point_to_json


# -- points -------------------------------------------------------------


def point_to_json(p):
    if isinstance(p, SpherePoint):
        return sphere_point_to_json(p)
    if isinstance(p, TilePoint):
        return tile_point_to_json(p)
    raise TypeError(f"not a point: {p!r}")


def point_from_json(obj, space: str):
    if space == SPHERE:
        return sphere_point_from_json(obj)
    if space == TRI:
        return tile_point_from_json(obj)
    raise ParseError(f"unknown space {space!r}")


def parse_sphere_point(text: str) -> SpherePoint:
    """Accepts "inf", "re,im", or Gaussian-rational syntax like "1/2+3*i"."""
    t = text.strip()
    if t in ("inf", "oo", "infinity"):
        return INF
    if "," in t:
        re_s, im_s = t.split(",", 1)
        return SpherePoint.finite(Fraction(re_s), Fraction(im_s))
    return SpherePoint(parse_gauss(t))


# -- measures -----------------------------------------------------------


def measure_to_json(mu: FiniteMeasure):
    return {
        "space": mu.space,
        "atoms": [
            {"point": point_to_json(p), "weight": format_rational(w)}
            for p, w in mu.atoms
        ],
        "atom_error": format_rational(mu.atom_error),
    }


def measure_from_json(obj) -> FiniteMeasure:
    try:
        space = obj["space"]
        atoms = [
            (point_from_json(a["point"], space), Fraction(a["weight"]))
            for a in obj["atoms"]
        ]
        err = Fraction(obj.get("atom_error", 0))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad measure JSON: {exc}") from exc
    return FiniteMeasure.from_atoms(space, atoms, atom_error=err,
                                    require_probability=False)


def measure_to_csv(mu: FiniteMeasure) -> str:
    """Plot-data CSV; decimals only (exact values live in the JSON)."""
    lines = []
    if mu.space == SPHERE:
        lines.append("point,re,im,weight")
        for idx, (p, w) in enumerate(mu.atoms):
            if p.is_infinity:
                lines.append(f"{idx},inf,inf,{float(w)!r}")
            else:
                z = p.as_gauss()
                lines.append(f"{idx},{float(z.re)!r},{float(z.im)!r},{float(w)!r}")
    else:
        lines.append("point,x,y,face,weight")
        for idx, (p, w) in enumerate(mu.atoms):
            a, b, c = (float(x) for x in p.coords)
            x = -0.5 * b + 0.5 * c
            y = 0.8660254037844386 * a
            lines.append(f"{idx},{x!r},{y!r},{p.face},{float(w)!r}")
    return "\n".join(lines) + "\n"


# -- rational maps ------------------------------------------------------


def map_to_json(f: RationalMapRec):
    return {
        "num": [format_gauss(c) for c in f.num.coeffs],
        "den": [format_gauss(c) for c in f.den.coeffs],
    }


def map_from_json(obj) -> RationalMapRec:
    try:
        num = Polynomial(tuple(parse_gauss(c) for c in obj["num"]))
        den = Polynomial(tuple(parse_gauss(c) for c in obj["den"]))
        return RationalMapRec(num, den)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad map JSON: {exc}") from exc


_TOKEN = re.compile(r"\s*(z|i\b|\d+/\d+|\d+|\^|\+|-|\*|/|\(|\))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad map expression near {text[pos:pos+8]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _RatFun:
    """Rational-function value for expression parsing: num/den pair."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        self.num, self.den = num, den

    @staticmethod
    def const(c: GaussRat) -> "_RatFun":
        return _RatFun(Polynomial.of(c), Polynomial.of(1))

    def __add__(self, o):
        return _RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return _RatFun(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return _RatFun(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if o.num.is_zero():
            raise ParseError("division by zero in map expression")
        return _RatFun(self.num * o.den, self.den * o.num)

    def pow(self, k: int) -> "_RatFun":
        out = _RatFun.const(GaussRat.of(1))
        for _ in range(k):
            out = out * self
        return out


class _ExprParser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse(self) -> _RatFun:
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing tokens in map expression: {self.toks[self.pos:]}")
        return v

    def expr(self) -> _RatFun:
        if self.peek() in ("+", "-"):
            sign = self.next()
            v = self.term()
            if sign == "-":
                v = _RatFun.const(GaussRat.of(0)) - v
        else:
            v = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> _RatFun:
        v = self.power()
        while True:
            t = self.peek()
            if t in ("*", "/"):
                self.next()
                rhs = self.power()
                v = v * rhs if t == "*" else v / rhs
            elif t in ("z", "i", "(") or (t is not None and t[0].isdigit()):
                v = v * self.power()  # implicit multiplication, e.g. "2z"
            else:
                return v

    def power(self) -> _RatFun:
        v = self.atom()
        while self.peek() == "^":
            self.next()
            t = self.next()
            if t is None or not t.isdigit():
                raise ParseError("exponent must be a nonnegative integer")
            v = v.pow(int(t))
        return v

    def atom(self) -> _RatFun:
        t = self.next()
        if t == "(":
            v = self.expr()
            if self.next() != ")":
                raise ParseError("unbalanced parentheses in map expression")
            return v
        if t == "z":
            return _RatFun(Polynomial.of(0, 1), Polynomial.of(1))
        if t == "i":
            return _RatFun.const(GaussRat.of(0, 1))
        if t is not None and (t[0].isdigit()):
            return _RatFun.const(GaussRat.of(Fraction(t), 0))
        raise ParseError(f"unexpected token {t!r} in map expression")


def parse_map(text: str) -> RationalMapRec:
    """Parse expressions like "z^2", "z^2-2", "(z^2+1)/(z^2-1)"."""
    rf = _ExprParser(_tokenize(text)).parse()
    num, den = rf.num, rf.den
    g = poly_gcd(num, den)
    if g.degree >= 1:
        num, _ = num.divmod(g)
        den, _ = den.divmod(g)
    return RationalMapRec(num, den)


def parse_potential(text: str) -> Potential:
    """CLI potential syntax: "const:q", "basis:re,im" (or basis:inf),
    "scale:q:inner", or "@file.json" for a full expression tree."""
    from . import potentials as pot

    t = text.strip()
    if t.startswith("@"):
        with open(t[1:], "r", encoding="utf-8") as fh:
            return potential_from_json(json.load(fh))
    if t.startswith("const:"):
        return pot.const(Fraction(t.split(":", 1)[1]))
    if t.startswith("basis:"):
        return pot.basis(parse_sphere_point(t.split(":", 1)[1]))
    if t.startswith("scale:"):
        _, q, inner = t.split(":", 2)
        return pot.scale(Fraction(q), parse_potential(inner))
    raise ParseError(f"bad potential spec {text!r}")


# -- generic json io ----------------------------------------------------


def dump_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)

"""Subdivision-rule dynamics on the doubled equilateral triangle.

Two piecewise-affine branched coverings of the pillow sphere are encoded
as rule tables: a degree-6 barycentric rule (each face cuts into six
triangles through the medians) and a degree-8 rule (each face cuts into
eight triangles through the edge midpoints and two interior points on the
A-median).  A rule table lists, per face, the child triangles by vertex
label together with a 3-coloring of the vertex labels; the color of a
vertex is its image corner, each child sees all three colors, and the
face a child maps onto is forced by orientation, so the resulting map is
an orientation-preserving branched covering with postcritical set
{A, B, C}.  Everything downstream (tile complexes, flowers, measures of
maximal entropy, diameters) is exact rational arithmetic over the rule
table; no vertex degree or incidence count is ever hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .balls import BallReal, sqrt_of_rational
from .dyadics import ZERO
from .errors import NotAVertex, RuleMismatch
from .measures import TRI, FiniteMeasure
from .trisphere import BACK, FRONT, Coords, TilePoint, barycenter, dist2_tri, tile_point

CORNERS = ("A", "B", "C")

_F = Fraction


def _coords(a, b, c) -> Coords:
    return (_F(a), _F(b), _F(c))


@dataclass(frozen=True)
class RuleTable:
    name: str
    degree: int
    vertices: dict[str, Coords]
    children: tuple[tuple[str, str, str], ...]
    colors: dict[str, str]

    def validate(self) -> None:
        assert len(self.children) == self.degree
        for tri in self.children:
            cols = {self.colors[v] for v in tri}
            if cols != set(CORNERS):
                raise ValueError(f"{self.name}: child {tri} misses a color")
            if _det3(*(self.vertices[v] for v in tri)) == 0:
                raise ValueError(f"{self.name}: degenerate child {tri}")
        total = sum(abs(_det3(*(self.vertices[v] for v in tri)))
                    for tri in self.children)
        if total != 1:
            raise ValueError(f"{self.name}: children do not tile the face")


def _det3(p: Coords, q: Coords, r: Coords) -> Fraction:
    """Signed area of (p, q, r) relative to the face (A, B, C)."""
    return (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )


_G1 = RuleTable(
    name="g1",
    degree=6,
    vertices={
        "A": _coords(1, 0, 0),
        "B": _coords(0, 1, 0),
        "C": _coords(0, 0, 1),
        "D": _coords(0, _F(1, 2), _F(1, 2)),
        "E": _coords(_F(1, 2), 0, _F(1, 2)),
        "F": _coords(_F(1, 2), _F(1, 2), 0),
        "G": _coords(_F(1, 3), _F(1, 3), _F(1, 3)),
    },
    children=(
        ("A", "F", "G"), ("F", "B", "G"), ("B", "D", "G"),
        ("D", "C", "G"), ("C", "E", "G"), ("E", "A", "G"),
    ),
    colors={"A": "A", "B": "A", "C": "A", "D": "B", "E": "B", "F": "B", "G": "C"},
)

_G2 = RuleTable(
    name="g2",
    degree=8,
    vertices={
        "A": _coords(1, 0, 0),
        "B": _coords(0, 1, 0),
        "C": _coords(0, 0, 1),
        "D": _coords(0, _F(1, 2), _F(1, 2)),
        "E": _coords(_F(1, 2), 0, _F(1, 2)),
        "F": _coords(_F(1, 2), _F(1, 2), 0),
        "U": _coords(_F(1, 2), _F(1, 4), _F(1, 4)),
        "L": _coords(_F(1, 4), _F(3, 8), _F(3, 8)),
    },
    children=(
        ("A", "F", "U"), ("A", "U", "E"), ("F", "L", "U"), ("U", "L", "E"),
        ("F", "B", "L"), ("B", "D", "L"), ("D", "C", "L"), ("C", "E", "L"),
    ),
    colors={"A": "A", "B": "C", "C": "C", "D": "B",
            "E": "B", "F": "B", "U": "C", "L": "A"},
)

RULES = {"g1": _G1, "g2": _G2}
for _rule in RULES.values():
    _rule.validate()


def rule_degree(rule: str) -> int:
    return _get_rule(rule).degree


def _get_rule(rule: str) -> RuleTable:
    if rule not in RULES:
        raise RuleMismatch(f"unknown rule {rule!r}")
    return RULES[rule]


def _face_sign(face: str) -> int:
    return 1 if face == FRONT else -1


def _parity(colors: tuple[str, str, str]) -> int:
    """+1 if the color triple is an even permutation of (A, B, C)."""
    return 1 if colors in (("A", "B", "C"), ("B", "C", "A"), ("C", "A", "B")) else -1


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Tile:
    """One closed triangle of the level-n cell structure.

    colors[j] names the corner the j-th vertex reaches under n map
    applications; target_face is the face the tile maps onto under them.
    parent_id is dynamical (the level-(n-1) tile this tile maps onto);
    container_id is geometric (the level-(n-1) tile containing it).
    """

    id: int
    face: str
    verts: tuple[TilePoint, TilePoint, TilePoint]
    colors: tuple[str, str, str]
    target_face: str
    parent_id: int | None
    container_id: int | None

    def vert_coords(self) -> tuple[Coords, Coords, Coords]:
        return tuple(v.coords for v in self.verts)  # type: ignore[return-value]

    def barycenter(self) -> TilePoint:
        sums = [sum(v.coords[k] for v in self.verts) for k in range(3)]
        return tile_point(self.face, *(s / 3 for s in sums))


@dataclass
class TileComplex:
    rule: str
    level: int
    tiles: list[Tile]
    parent_complex: "TileComplex | None"
    # (level-1 tile id, level-(n-1) tile id) -> id of the tile obtained by
    # pulling the latter back through the former; drives container lookups
    # in the next subdivision round.
    child_of: dict[tuple[int, int], int] | None = None

    def __len__(self) -> int:
        return len(self.tiles)

    def vertex_set(self) -> set[TilePoint]:
        return {v for t in self.tiles for v in t.verts}

    def incident_tiles(self, v: TilePoint) -> list[int]:
        return [t.id for t in self.tiles if v in t.verts]

    def adjacency(self) -> dict[frozenset, list[int]]:
        """Edge (as a frozen pair of canonical endpoints) -> incident tiles."""
        edges: dict[frozenset, list[int]] = {}
        for t in self.tiles:
            for a, b in ((0, 1), (1, 2), (0, 2)):
                key = frozenset((t.verts[a], t.verts[b]))
                edges.setdefault(key, []).append(t.id)
        return edges


def _level_one_tiles(table: RuleTable) -> list[Tile]:
    tiles = []
    tid = 0
    for face in (FRONT, BACK):
        for tri in table.children:
            verts = tuple(tile_point(face, *table.vertices[v]) for v in tri)
            colors = tuple(table.colors[v] for v in tri)
            orient = _sign(_det3(*(table.vertices[v] for v in tri)))
            target = FRONT if orient * _face_sign(face) * _parity(colors) == 1 else BACK
            tiles.append(Tile(tid, face, verts, colors, target,
                              parent_id=0 if target == FRONT else 1,
                              container_id=0 if face == FRONT else 1))
            tid += 1
    return tiles


def _solve_barycentric(verts: tuple[Coords, Coords, Coords], p: Coords
                       ) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients lambda with p = sum lambda_j verts_j (Cramer, exact)."""
    d = _det3(*verts)
    l1 = _det3(p, verts[1], verts[2]) / d
    l2 = _det3(verts[0], p, verts[2]) / d
    l3 = _det3(verts[0], verts[1], p) / d
    return (l1, l2, l3)


def _apply_chart(colors: tuple[str, str, str], lam, target_face: str) -> TilePoint:
    out = {"A": ZERO, "B": ZERO, "C": ZERO}
    for c, l in zip(colors, lam):
        out[c] += l
    return tile_point(target_face, out["A"], out["B"], out["C"])


def _pullback(tile: Tile, q: Coords) -> Coords:
    """Preimage in `tile` of the point with coords q on tile.target_face."""
    weight = dict(zip(tile.colors, tile.verts))
    by_color = {c: weight[c].coords for c in CORNERS}
    return tuple(
        q[0] * by_color["A"][k] + q[1] * by_color["B"][k] + q[2] * by_color["C"][k]
        for k in range(3)
    )  # type: ignore[return-value]


@lru_cache(maxsize=None)
def tile_complex(rule: str, level: int) -> TileComplex:
    """The level-n cell structure, built by pulling level-(n-1) tiles back
    through the rule's twelve/sixteen level-one charts."""
    table = _get_rule(rule)
    if level < 0:
        raise ValueError("level must be >= 0")
    if level == 0:
        tiles = [
            Tile(0, FRONT,
                 (tile_point(FRONT, 1, 0, 0), tile_point(FRONT, 0, 1, 0),
                  tile_point(FRONT, 0, 0, 1)),
                 ("A", "B", "C"), FRONT, None, None),
            Tile(1, BACK,
                 (tile_point(BACK, 1, 0, 0), tile_point(BACK, 0, 1, 0),
                  tile_point(BACK, 0, 0, 1)),
                 ("A", "B", "C"), BACK, None, None),
        ]
        return TileComplex(rule, 0, tiles, None)
    if level == 1:
        prev = tile_complex(rule, 0)
        return TileComplex(rule, 1, _level_one_tiles(table), prev)
    prev = tile_complex(rule, level - 1)
    ones = _level_one_tiles(table)
    child_of: dict[tuple[int, int], int] = {}
    tiles: list[Tile] = []
    tid = 0
    for u in ones:
        for x in prev.tiles:
            if x.face != u.target_face:
                continue
            verts = tuple(
                tile_point(u.face, *_pullback(u, v.coords)) for v in x.verts
            )
            # The container is the pullback through u of x's own container,
            # recorded when prev was built (u itself at the base level).
            if prev.level == 1:
                container = u.id
            else:
                container = prev.child_of[(u.id, x.container_id)]
            child_of[(u.id, x.id)] = tid
            tiles.append(Tile(tid, u.face, verts, x.colors, x.target_face,
                              parent_id=x.id, container_id=container))
            tid += 1
    return TileComplex(rule, level, tiles, prev, child_of)


def subdivide(c: TileComplex, rule: str) -> TileComplex:
    """Level n+1 complex from a level-n complex of the same rule."""
    if c.rule != rule:
        raise RuleMismatch(f"complex was generated by {c.rule!r}, not {rule!r}")
    return tile_complex(rule, c.level + 1)


@dataclass(frozen=True)
class SubdivisionMap:
    """The piecewise-affine branched covering defined by a rule table."""

    rule: str

    @property
    def degree(self) -> int:
        return rule_degree(self.rule)

    def __call__(self, p: TilePoint) -> TilePoint:
        return self.eval(p)

    def eval(self, p: TilePoint, level_hint: int | None = None) -> TilePoint:
        """Image of p: locate p in a level-1 tile and apply its chart.

        Boundary points are located consistently from any incident tile
        (lowest tile id wins; the charts agree on shared edges, so the
        tie-break never changes the value).  level_hint is accepted for
        interface parity and unused: location always happens at level 1.
        """
        del level_hint
        ones = tile_complex(self.rule, 1)
        for t in ones.tiles:
            if t.face != p.face and not p.on_boundary:
                continue
            lam = _solve_barycentric(t.vert_coords(), p.coords)
            if all(l >= 0 for l in lam):
                return _apply_chart(t.colors, lam, t.target_face)
        raise ValueError(f"point {p!r} not located in any level-1 tile")


def vertex_image(rule: str, v: TilePoint) -> TilePoint:
    """Image of a complex vertex under one application of the map."""
    return SubdivisionMap(rule).eval(v)


def vertex_local_degree(rule: str, v: TilePoint, level: int = 1) -> Fraction:
    """Local degree at a level-`level` vertex, from incidence counts:
    (tiles at v in level n) / (tiles at the image of v in level n-1)."""
    c = tile_complex(rule, level)
    if v not in c.vertex_set():
        raise NotAVertex(f"{v!r} is not a level-{level} vertex")
    below = tile_complex(rule, level - 1)
    img = vertex_image(rule, v)
    up = len(c.incident_tiles(v))
    down = len(below.incident_tiles(img))
    return Fraction(up, down)


def mme_tile_measure(rule: str, n: int) -> FiniteMeasure:
    """Equal weight (2 deg^n)^-1 on every level-n tile barycenter.

    Affine charts send barycenters to barycenters, so the pushforward of
    this measure under the subdivision map is exactly the level-(n-1)
    measure: the strongest finite-level witness that these approximate
    the measure of maximal entropy.
    """
    c = tile_complex(rule, n)
    w = Fraction(1, len(c.tiles))
    return FiniteMeasure.from_atoms(TRI, [(t.barycenter(), w) for t in c.tiles])


def flower(c: TileComplex, v: TilePoint, n: int | None = None) -> set[int]:
    """Ids of the level-n tiles whose closure contains the vertex v."""
    if n is not None and n != c.level:
        c = tile_complex(c.rule, n)
    if v not in c.vertex_set():
        raise NotAVertex(f"{v!r} is not a vertex of the level-{c.level} complex")
    return set(c.incident_tiles(v))


def flower_mass(rule: str, v: TilePoint, n: int) -> Fraction:
    """mme_tile_measure(rule, n) mass of the closed n-flower of v."""
    c = tile_complex(rule, n)
    ids = flower(c, v)
    return Fraction(len(ids), len(c.tiles))


def max_tile_diameter(c: TileComplex, prec: int = 40) -> BallReal:
    """Largest tile diameter (longest edge; tiles are flat triangles)."""
    best = ZERO
    for t in c.tiles:
        for a, b in ((0, 1), (1, 2), (0, 2)):
            d2 = dist2_tri(t.verts[a], t.verts[b])
            if d2 > best:
                best = d2
    return sqrt_of_rational(best, prec)


def tile_complex_to_json(c: TileComplex):
    from .dyadics import format_rational

    return {
        "rule": c.rule,
        "level": c.level,
        "tiles": [
            {
                "id": t.id,
                "face": t.face,
                "verts": [[format_rational(x) for x in v.coords] for v in t.verts],
            }
            for t in c.tiles
        ],
        "parent": [t.parent_id for t in c.tiles],
    }

import random
from fractions import Fraction as F

import pytest

from equistate.errors import ExcludedPoint
from equistate.gauss import GaussRat
from equistate.polynomials import (
    Polynomial,
    poly_from_roots,
    poly_gcd,
    square_free_decomposition,
)
from equistate.ratmap import (
    RationalMapRec,
    critical_points,
    is_misiurewicz_thurston,
    local_degree,
    postcritical_orbit,
    preimages,
)
from equistate.roots import certified_roots
from equistate.sphere import INF, SpherePoint, chordal_sq

S = SpherePoint.finite
Z2 = RationalMapRec(Polynomial.of(0, 0, 1), Polynomial.of(1))
Z2M2 = RationalMapRec(Polynomial.of(-2, 0, 1), Polynomial.of(1))
Z2M1 = RationalMapRec(Polynomial.of(-1, 0, 1), Polynomial.of(1))
LATTES_LIKE = RationalMapRec(Polynomial.of(1, 0, 1), Polynomial.of(-1, 0, 1))


# -- polynomial algebra -------------------------------------------------


def test_gcd_and_coprimality_guard():
    p = poly_from_roots([GaussRat.of(1), GaussRat.of(2)])
    q = poly_from_roots([GaussRat.of(2), GaussRat.of(3)])
    g = poly_gcd(p, q)
    assert g.degree == 1 and g(GaussRat.of(2)).is_zero()
    with pytest.raises(ValueError):
        RationalMapRec(p, q)


def test_square_free_decomposition():
    # (z-1)^2 (z+i)
    p = poly_from_roots([GaussRat.of(1), GaussRat.of(1), GaussRat.of(0, -1)])
    parts = square_free_decomposition(p)
    mults = sorted(m for _, m in parts)
    assert mults == [1, 2]


# -- certified roots ----------------------------------------------------


def test_roots_z2_minus_1():
    clusters = certified_roots(Polynomial.of(-1, 0, 1), 10)
    assert sorted(c.multiplicity for c in clusters) == [1, 1]
    mids = sorted(c.midpoint.re for c in clusters)
    assert mids == [F(-1), F(1)]
    for c in clusters:
        assert c.center.rad <= F(1, 1 << 10)


def test_roots_z3_multiplicity():
    clusters = certified_roots(Polynomial.of(0, 0, 0, 1), 10)
    assert len(clusters) == 1
    assert clusters[0].multiplicity == 3
    assert clusters[0].midpoint == GaussRat.of(0)


def test_roots_constructed_factors():
    z1, z2 = GaussRat.of(1, 1), GaussRat.of(2)
    clusters = certified_roots(poly_from_roots([z1, z2]), 30)
    assert len(clusters) == 2
    for target in (z1, z2):
        hit = [c for c in clusters
               if (c.midpoint - target).abs2() <= c.euclid_rad ** 2]
        assert len(hit) == 1


def test_roots_disjoint_and_sum():
    rng = random.Random(9)
    for _ in range(10):
        roots = [GaussRat.of(F(rng.randint(-6, 6), rng.randint(1, 3)),
                             F(rng.randint(-6, 6), rng.randint(1, 3)))
                 for _ in range(4)]
        p = poly_from_roots(roots)
        clusters = certified_roots(p, 20)
        assert sum(c.multiplicity for c in clusters) == 4
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                zi, zj = clusters[i], clusters[j]
                d2 = chordal_sq(zi.center.center, zj.center.center)
                assert d2 > (zi.center.rad + zj.center.rad) ** 2


# -- rational maps ------------------------------------------------------


def test_apply_basics():
    assert Z2.apply(INF) == INF
    assert Z2.apply(S(2)) == S(4)
    inv = RationalMapRec(Polynomial.of(1), Polynomial.of(0, 0, 1))
    assert inv.apply(INF) == S(0)
    assert inv.apply(S(0)) == INF


def test_preimages_z2_examples():
    pre = preimages(Z2, S(1), 20)
    assert sorted(c.midpoint.re for c in pre) == [F(-1), F(1)]
    assert all(c.multiplicity == 1 for c in pre)
    pre0 = preimages(Z2, S(0), 20)
    assert len(pre0) == 1 and pre0[0].multiplicity == 2
    prem2 = preimages(Z2M2, S(-2), 20)
    assert len(prem2) == 1 and prem2[0].multiplicity == 2
    assert prem2[0].midpoint == GaussRat.of(0)


def test_preimages_excluded_point():
    with pytest.raises(ExcludedPoint):
        preimages(Z2, INF, 20)


def test_preimages_of_infinity_when_allowed():
    inv = RationalMapRec(Polynomial.of(1), Polynomial.of(0, 0, 1))  # 1/z^2
    pre = preimages(inv, INF, 20)
    assert len(pre) == 1 and pre[0].multiplicity == 2
    assert pre[0].midpoint == GaussRat.of(0)


def test_preimage_apply_consistency():
    rng = random.Random(4)
    for _ in range(12):
        y = S(F(rng.randint(-5, 5), rng.randint(1, 4)),
              F(rng.randint(-5, 5), rng.randint(1, 4)))
        x = Z2M2.apply(y)
        if x == Z2M2.apply(INF):
            continue
        pre = preimages(Z2M2, x, 30)
        assert sum(c.multiplicity for c in pre) == 2
        # y is within some certified disc
        assert any(
            chordal_sq(c.center.center, y) <= (c.center.rad + F(1, 1 << 28)) ** 2
            for c in pre
        )


def test_multiplicity_conservation_misc_points():
    rng = random.Random(8)
    for f in (Z2, Z2M2, LATTES_LIKE):
        f_inf = f.apply(INF)
        for _ in range(6):
            x = S(F(rng.randint(-9, 9), rng.randint(1, 4)),
                  F(rng.randint(-9, 9), rng.randint(1, 4)))
            if x == f_inf:
                continue
            pre = preimages(f, x, 25)
            assert sum(c.multiplicity for c in pre) == f.degree


def test_critical_points_z2():
    crit = critical_points(Z2, 20)
    pts = {c.center.center for c in crit}
    assert pts == {S(0), INF}


def test_critical_points_rational():
    crit = critical_points(LATTES_LIKE, 20)
    pts = {c.center.center for c in crit}
    assert S(0) in pts and INF in pts
    total = sum(c.multiplicity for c in crit)
    assert total == 2 * LATTES_LIKE.degree - 2


def test_local_degree():
    assert local_degree(Z2, S(0)) == 2
    assert local_degree(Z2, S(3)) == 1
    assert local_degree(Z2, INF) == 2


def test_postcritical_orbits():
    res = postcritical_orbit(Z2)
    assert res.is_finite and res.points == frozenset({S(0), INF})

    res = postcritical_orbit(Z2M2)
    assert res.is_finite
    assert res.points == frozenset({S(-2), S(2), INF})

    res = postcritical_orbit(Z2M1)
    assert res.is_finite
    assert res.points == frozenset({S(-1), S(0), INF})
    assert res.periods[S(0)] == 2 and res.periods[S(-1)] == 2


def test_misiurewicz_thurston_detection():
    # Polynomials always have the periodic critical point at infinity.
    assert is_misiurewicz_thurston(Z2) is False
    assert is_misiurewicz_thurston(Z2M2) is False
    # (z^2-2)/z^2: critical orbits 0 -> inf -> 1 -> -1 (fixed), both
    # critical points strictly preperiodic.
    mt = RationalMapRec(Polynomial.of(-2, 0, 1), Polynomial.of(0, 0, 1))
    assert is_misiurewicz_thurston(mt) is True
    res = postcritical_orbit(mt)
    assert res.points == frozenset({INF, S(1), S(-1)})

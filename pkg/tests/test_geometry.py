import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_point, random_polytope
from sgpareto import geometry as geo
from sgpareto.errors import DimensionError, InfeasibleSystemError, ResourceLimitError, ValidationError
from sgpareto.geometry import HalfSpace, dwc

H = F(1, 2)
TRIANGLE = dwc((1, 0), (0, 1))


def fr(*xs):
    return tuple(F(x) for x in xs)


# -- frozen examples -------------------------------------------------------------


def test_canonicalize_examples():
    assert geo.canonicalize([fr(1, 0), fr(0, 1), (H, F(1, 4))]).generators == (fr(0, 1), fr(1, 0))
    assert geo.canonicalize([fr(1, 1)]) == geo.full(2)
    assert geo.canonicalize([fr(1, 0), fr(1, 0)]).generators == (fr(1, 0),)


def test_canonicalize_rejects_bad_input():
    with pytest.raises(DimensionError):
        geo.canonicalize([fr(1, 0), fr(1, 0, 0)])
    with pytest.raises(ValidationError):
        geo.canonicalize([fr(2, 0)])
    with pytest.raises(ValidationError):
        geo.canonicalize([])


def test_membership_examples():
    assert geo.contains_point(TRIANGLE, (H, H))
    assert not geo.contains_point(TRIANGLE, fr("3/5", "3/5"))
    assert geo.contains_point(random_polytope(random.Random(1), 3), fr(0, 0, 0))
    with pytest.raises(DimensionError):
        geo.contains_point(TRIANGLE, fr(0, 0, 0))


def test_strict_membership_examples():
    half = dwc((H, H))
    assert geo.contains_strictly(half, fr("2/5", "2/5"))
    assert not geo.contains_strictly(half, (H, 0))
    assert not geo.contains_strictly(geo.full(2), fr(1, 1))


def test_includes_examples():
    assert geo.includes(geo.full(2), TRIANGLE)
    assert geo.includes(TRIANGLE, dwc((H, H)))
    assert not geo.includes(dwc((1, 0)), dwc((H, H)))


def test_intersect_examples():
    assert geo.intersect(TRIANGLE, geo.full(2)) == TRIANGLE
    assert geo.intersect(dwc((1, 0)), dwc((0, 1))) == geo.zero(2)
    assert geo.intersect(TRIANGLE, dwc((H, 1))) == dwc((H, H), (0, 1))


def test_convex_union_examples():
    assert geo.convex_union([dwc((1, 0)), dwc((0, 1))]) == TRIANGLE
    assert geo.convex_union([TRIANGLE, TRIANGLE]) == TRIANGLE
    assert geo.convex_union([geo.full(2), dwc((H, H))]) == geo.full(2)


def test_weighted_sum_examples():
    assert geo.weighted_sum([(H, TRIANGLE), (H, geo.zero(2))]) == dwc((H, 0), (0, H))
    assert geo.weighted_sum([(1, TRIANGLE)]) == TRIANGLE
    assert geo.weighted_sum([(H, TRIANGLE), (H, dwc((1, 0)))]) == dwc((1, 0), (H, H))
    with pytest.raises(ValidationError):
        geo.weighted_sum([(H, TRIANGLE), (F(1, 3), TRIANGLE)])


def test_facets_examples():
    assert geo.dual_representation(TRIANGLE) == [HalfSpace(fr(1, 1), F(1))]
    assert geo.dual_representation(geo.full(2)) == []
    system = [HalfSpace(fr(1, 0), H), HalfSpace(fr(1, 1), F(1))]
    assert geo.vertices_of(system) == {fr(0, 0), (H, 0), (H, H), fr(0, 1)}


def test_infeasible_system_is_signalled():
    with pytest.raises(InfeasibleSystemError):
        geo.vertices_of([HalfSpace(fr(-1, 0), F(-2))])


def test_minimize_antichain_examples():
    a, b = dwc((1, 0)), dwc((H, H))
    assert set(geo.minimize_antichain([TRIANGLE, a, b])) == {a, b}
    assert geo.minimize_antichain([a]) == (a,)
    assert geo.minimize_antichain([a, dwc((1, 0))]) == (a,)


def test_json_round_trip_and_repr():
    p = dwc((H, 1), ("3/4", "1/4"))
    assert geo.DcPolytope.from_json(p.to_json()) == p
    assert geo.set_from_json(geo.set_to_json([p, p, TRIANGLE])) == (p, TRIANGLE)
    assert repr(TRIANGLE) == "dwc{(0,1), (1,0)}"


def test_generator_guardrail(monkeypatch):
    monkeypatch.setattr(geo.LIMITS, "max_generators", 2)
    pts = [(F(i, 4), 1 - F(i, 4) ** 2) for i in range(5)]
    with pytest.raises(ResourceLimitError):
        geo.canonicalize(pts)


# -- dual routes: 2-D staircase kernel vs. LP/polar reference --------------------------

unit = st.integers(0, 8).map(lambda v: F(v, 8))
points2 = st.lists(st.tuples(unit, unit), min_size=1, max_size=7)
points3 = st.lists(st.tuples(unit, unit, unit), min_size=1, max_size=6)


@given(points2)
def test_canonical_2d_matches_lp_route(pts):
    assert geo.canonicalize(pts) == geo.canonicalize_general(pts)


@given(points2, points2)
def test_intersect_2d_matches_general(a, b):
    p, q = geo.canonicalize(a), geo.canonicalize(b)
    assert geo.intersect(p, q) == geo.intersect_general(p, q)


@given(points2)
def test_facets_2d_match_polar_route(pts):
    p = geo.canonicalize(pts)
    assert sorted(p.facets, key=lambda h: (h.normal, h.offset)) == geo.facets_general(p)


@given(points2, st.tuples(unit, unit))
def test_membership_routes_agree(pts, x):
    p = geo.canonicalize(pts)
    assert geo.contains_point(p, x) == geo.contains_point_lp(p, x) == geo.satisfies_facets(p, x)
    assert geo.contains_strictly(p, x) == geo.contains_strictly_lp(p, x)


@given(points3, st.tuples(unit, unit, unit))
def test_membership_routes_agree_3d(pts, x):
    p = geo.canonicalize(pts)
    assert geo.contains_point(p, x) == geo.contains_point_lp(p, x) == geo.satisfies_facets(p, x)
    assert geo.contains_strictly(p, x) == geo.contains_strictly_lp(p, x)


# -- properties --------------------------------------------------------------------------


@given(st.one_of(points2, points3))
def test_canonical_is_an_extreme_antichain(pts):
    p = geo.canonicalize(pts)
    gens = p.generators
    for i, g in enumerate(gens):
        others = gens[:i] + gens[i + 1:]
        assert not any(all(a <= b for a, b in zip(g, h)) for h in others)
        if others:
            assert not geo.contains_point(geo.canonicalize(others, dim=p.dim), g)
    assert geo.canonicalize(gens, dim=p.dim) == p
    for x in pts:
        assert geo.contains_point(p, x)


@settings(max_examples=60)
@given(points3, points3)
def test_intersect_3d_is_the_set_intersection(a, b):
    p, q = geo.canonicalize(a), geo.canonicalize(b)
    r = geo.intersect(p, q)
    assert geo.includes(p, r) and geo.includes(q, r)
    rng = random.Random(len(a) * 31 + len(b))
    for _ in range(5):
        x = random_point(rng, 3, 8)
        assert geo.contains_point(r, x) == (geo.contains_point(p, x) and geo.contains_point(q, x))


@given(points2, points2, st.integers(1, 7).map(lambda v: F(v, 8)))
def test_weighted_sum_bounds(a, b, w):
    p, q = geo.canonicalize(a), geo.canonicalize(b)
    s = geo.weighted_sum([(w, p), (1 - w, q)])
    for g in s.generators:
        # each generator splits into members of p and q
        assert any(
            all(v == w * y + (1 - w) * z for v, y, z in zip(g, gy, gz))
            for gy in p.generators for gz in q.generators
        )


@given(st.lists(points2, min_size=1, max_size=5), st.tuples(unit, unit))
def test_minimize_preserves_intersection(family, x):
    ps = [geo.canonicalize(f) for f in family]
    kept = geo.minimize_antichain(ps)
    assert all(geo.contains_point(p, x) for p in ps) == all(geo.contains_point(p, x) for p in kept)
    for i, p in enumerate(kept):
        for j, q in enumerate(kept):
            if i != j:
                assert not geo.includes(p, q)

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropquartic.divisor import Divisor, canonical_divisor, linearly_equivalent, rank
from tropquartic.lattice import regular_heights, standard_triangulation
from tropquartic.tropcurve import (PERTURBATION_ALT, CurveMismatch, DegenerateInput, InconsistentLift,
                                   LineFamily, check_balancing, dual_curve,
                                   intersection_components, is_smooth, push_to_metric, sigma_graph,
                                   skeleton, stable_intersection, tropical_line,
                                   tropical_lines_through)

F = Fraction


@pytest.fixture(scope="module")
def standard_curve():
    t = standard_triangulation(4)
    return dual_curve(t, regular_heights(t))


def test_standard_curve_shape(standard_curve):
    c = standard_curve
    assert len(c.vertices) == 16 and len(c.bounded_edges) == 18 and len(c.rays) == 12
    assert check_balancing(c) and is_smooth(c)
    for cell in c.bounded_edges:
        a, b = cell.dual
        # edges are perpendicular to their dual lattice segments
        assert cell.direction[0] * (b[0] - a[0]) + cell.direction[1] * (b[1] - a[1]) == 0
        assert cell.length > 0
        head = c.point_on(cell, cell.length)
        assert head == c.vertices[cell.head]


def test_curve_json(standard_curve):
    js = standard_curve.to_json()
    assert js["schema"] == "tropquartic.curve/1"
    assert len(js["edges"]) == 18 and len(js["rays"]) == 12


def test_inconsistent_lift_rejected(quartic_triangulations):
    t = standard_triangulation(4)
    other = next(u for u in quartic_triangulations if u != t)
    with pytest.raises(InconsistentLift):
        dual_curve(t, regular_heights(other))


def test_census_sample_structure(sample_curves):
    for cc in sample_curves:
        c = cc.curve
        assert check_balancing(c) and is_smooth(c)
        assert all(cell.length > 0 for cell in c.bounded_edges)


def test_line_line_intersection():
    a, b = tropical_line((0, 0)), tropical_line((2, 1))
    d = stable_intersection(a, b)
    assert d.degree() == 1
    assert stable_intersection(a, a).points == [((0, 0), 1)]


def test_lines_through_points():
    assert tropical_lines_through((0, 0), (2, 5)).vertices[0] == (0, 3)
    assert tropical_lines_through((0, 0), (3, 1)).vertices[0] == (2, 0)
    fam = tropical_lines_through((0, 0), (1, 1))
    assert isinstance(fam, LineFamily) and fam.length is None
    assert isinstance(tropical_lines_through((0, 0), (0, -3)), LineFamily)
    with pytest.raises(DegenerateInput):
        tropical_lines_through((1, 1), (1, 1))


point = st.tuples(st.integers(-12, 12), st.integers(-12, 12)).map(lambda p: (F(p[0], 2), F(p[1], 2)))


@given(point, point)
def test_lines_through_contain_both_points(p, q):
    if p == q:
        return
    res = tropical_lines_through(p, q)
    lines = ([tropical_line(v) for v in res.sample(random.Random(0))]
             if isinstance(res, LineFamily) else [res])
    for L in lines:
        for x in (p, q):
            assert L.locate(x) is not None


@given(point)
def test_bezout_and_perturbation_independence(standard_curve, v):
    L = tropical_line(v)
    a = stable_intersection(standard_curve, L)
    b = stable_intersection(standard_curve, L, PERTURBATION_ALT)
    assert a.degree() == 4
    assert a.points == b.points
    assert stable_intersection(L, standard_curve).degree() == 4


@given(point)
def test_components_carry_the_stable_multiplicity(standard_curve, v):
    comps = intersection_components(v, standard_curve)
    assert sum(c.multiplicity for c in comps) == 4
    assert all(c.multiplicity > 0 for c in comps)


def _random_vertex(rng, c):
    xs = [p[0] for p in c.vertices]
    ys = [p[1] for p in c.vertices]
    return (F(rng.randint(int(min(xs)) * 4 - 8, int(max(xs)) * 4 + 8), 4),
            F(rng.randint(int(min(ys)) * 4 - 8, int(max(ys)) * 4 + 8), 4))


def test_line_sections_equivalent_on_sigma(sample_curves):
    rng = random.Random(5)
    for cc in sample_curves:
        c = cc.curve
        divs = [stable_intersection(c, tropical_line(_random_vertex(rng, c))) for _ in range(3)]
        pts = [p for d in divs for p, _ in d.points]
        g, locate = sigma_graph(c, pts)
        ds = [Divisor(g, {locate(p): m for p, m in d.points}) for d in divs]
        assert all(linearly_equivalent(ds[0], x) for x in ds[1:])


def test_pushed_sections_are_canonical(sample_curves):
    rng = random.Random(6)
    for cc in sample_curves:
        sk = cc.skeleton
        K = canonical_divisor(sk.graph)
        for _ in range(3):
            d = push_to_metric(sk, stable_intersection(cc.curve, tropical_line(_random_vertex(rng, cc.curve))))
            assert d.degree() == 4 and rank(d) == 2
            assert linearly_equivalent(d, K)


def test_skeleton_embed_retract(sample_curves):
    for cc in sample_curves:
        sk = cc.skeleton
        g = sk.graph
        for e in sorted(g.edges):
            p = g.midpoint(e)
            assert sk.retract(cc.curve.locate(sk.embed(p))) == p
        # every off-skeleton vertex retracts onto a skeleton vertex
        assert set(sk.attach.values()) <= set(g.vertices)


def test_locate_rejects_points_off_the_curve():
    L = tropical_line((0, 0))
    assert L.locate((-3, 0)) == ("c", 0, 3)
    with pytest.raises(CurveMismatch):
        L.locate((1, 2))

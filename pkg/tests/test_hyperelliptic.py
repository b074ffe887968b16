from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropquartic.divisor import Divisor, rank
from tropquartic.hyperelliptic import (HyperellipticCurveFound, NotApplicable, OutOfScope,
                                       cut_length_witness, degree_two_rank_one, far_point,
                                       hyperelliptic_report, hyperelliptic_verdict,
                                       is_hyperelliptic, verify_nonhyperelliptic)
from tropquartic.lattice import LatticePoint, interior_points
from tropquartic.metricgraph import (GraphPoint, circle, honeycomb_graph, mickey_mouse_graph,
                                     one_bridge_graph, path_graph, theta_graph, two_bridge_graph)


def test_genus_two_always():
    for g in (theta_graph(1, 2, 3), theta_graph(5, 5, 1)):
        assert is_hyperelliptic(g)
        assert degree_two_rank_one(g) is not None


def test_out_of_scope():
    with pytest.raises(OutOfScope):
        hyperelliptic_verdict(circle(3))
    with pytest.raises(OutOfScope):
        hyperelliptic_verdict(path_graph(1))


def test_mickey_mouse_equal_cut():
    v = hyperelliptic_verdict(mickey_mouse_graph((1, 2, 3, 5, 7, 3)))
    assert v.hyperelliptic
    assert v.witness.chips == {GraphPoint.vertex(0): 1, GraphPoint.vertex(1): 1}
    assert rank(v.witness) == 1


def test_mickey_mouse_unequal_cut():
    v = hyperelliptic_verdict(mickey_mouse_graph((1, 2, 3, 5, 7, 4)))
    assert not v.hyperelliptic
    assert sorted(v.unequal_cut[2:]) == [3, 4]


def test_bridge_types_with_equal_cuts():
    assert is_hyperelliptic(one_bridge_graph((2, 3, 4, 4, 1, 5)))
    assert is_hyperelliptic(two_bridge_graph((1, 2, 3, 3, 5, 6)))
    assert not is_hyperelliptic(two_bridge_graph((1, 2, 3, 4, 5, 6)))
    assert not is_hyperelliptic(one_bridge_graph((2, 3, 4, 5, 1, 5)))


@given(st.tuples(*[st.integers(1, 9)] * 6))
def test_honeycomb_never(lengths):
    g = honeycomb_graph(lengths)
    assert not is_hyperelliptic(g)


@settings(max_examples=15)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_verdict_matches_dense_search(a, b, c, d):
    g = mickey_mouse_graph((a, b, c, d, a + b, c))
    pts = [GraphPoint.vertex(v) for v in g.vertices]
    for e in sorted(g.edges):
        pts += [g.point(e, g.length(e) * Fraction(k, 4)) for k in (1, 2, 3)]
    dense = degree_two_rank_one(g, pts)
    assert (dense is not None) == is_hyperelliptic(g)


def test_far_point():
    assert far_point(LatticePoint(1, 1)) == (2, 2)
    assert far_point(LatticePoint(2, 1)) == (0, 2)
    assert far_point(LatticePoint(1, 2)) == (2, 0)
    assert {far_point(p) for p in interior_points(4)} == {(2, 2), (0, 2), (2, 0)}


def test_census_sample(sample_curves):
    for cc in sample_curves:
        v = verify_nonhyperelliptic(cc.curve)
        assert not v.hyperelliptic
        rep = hyperelliptic_report(cc.curve)
        if cc.kind == "Honeycomb":
            with pytest.raises(NotApplicable):
                cut_length_witness(cc.curve)
            assert rep["cut_witness"] is None
        else:
            w = cut_length_witness(cc.curve)
            assert w.e2_length > w.e1_length
            assert v.reason == "2-edge cut with unequal lengths"


def test_found_is_an_assertion():
    assert issubclass(HyperellipticCurveFound, AssertionError)
    assert Divisor(theta_graph(), [GraphPoint.vertex(0)] * 2).degree() == 2

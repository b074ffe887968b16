from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropquartic.metricgraph import (CombinatorialType, GraphError, GraphPoint, MetricGraph,
                                     ModelMap, circle, classify_type, honeycomb_graph,
                                     lollipop_graph, mickey_mouse_graph, one_bridge_graph,
                                     path_graph, theta_graph, two_bridge_graph)

NAMED = [
    (honeycomb_graph(), CombinatorialType.HONEYCOMB),
    (mickey_mouse_graph(), CombinatorialType.MICKEY_MOUSE),
    (one_bridge_graph(), CombinatorialType.ONE_BRIDGE),
    (two_bridge_graph(), CombinatorialType.TWO_BRIDGE),
    (lollipop_graph(), CombinatorialType.LOLLIPOP),
    (theta_graph(), CombinatorialType.OTHER),
]


def test_points_fold_into_vertices():
    g = path_graph(2)
    assert g.point(0, 0) == GraphPoint.vertex(0)
    assert g.point(0, 2) == GraphPoint.vertex(1)
    assert g.point(0, Fraction(1, 2)) == GraphPoint(0, Fraction(1, 2))
    with pytest.raises(GraphError):
        g.point(0, 3)


def test_nonpositive_length_rejected():
    with pytest.raises(GraphError):
        MetricGraph({0: (0, 1, 0)})


@pytest.mark.parametrize("g,kind", NAMED)
def test_named_types(g, kind):
    assert classify_type(g) == kind


def test_genus_and_bridges():
    assert circle().genus() == 1
    assert theta_graph().genus() == 2
    for g, _ in NAMED[:5]:
        assert g.genus() == 3
    assert one_bridge_graph().bridges() == [1]
    assert two_bridge_graph().bridges() == [1, 4]
    assert honeycomb_graph().bridges() == []


def test_two_edge_cuts():
    assert mickey_mouse_graph().two_edge_cuts() == [(2, 5)]
    assert honeycomb_graph().two_edge_cuts() == []
    assert (2, 3) in one_bridge_graph().two_edge_cuts()


def test_type_survives_subdivision():
    for g, kind in NAMED:
        pts = [g.midpoint(e) for e in sorted(g.edges)]
        h, _ = g.subdivide(pts)
        assert classify_type(h) == kind
        assert h.total_length() == g.total_length()


def test_minimal_model_of_subdivided_circle_is_a_loop():
    g = MetricGraph({0: (0, 1, 1), 1: (1, 2, 2), 2: (2, 0, 3)})
    m, chains = g.minimal_model()
    assert len(m.edges) == 1 and m.is_loop(0) and m.length(0) == 6
    assert [e for e, _ in chains[0]] == [0, 1, 2]


def test_disconnecting_pairs():
    mm = mickey_mouse_graph()
    assert mm.disconnects_without_points(mm.midpoint(2), mm.midpoint(5))
    assert not mm.disconnects_without_points(mm.midpoint(0), mm.midpoint(1))
    k4 = honeycomb_graph()
    # a vertex and a point on one of its edges cut off a segment
    assert k4.disconnects_without_points(GraphPoint.vertex(0), k4.midpoint(0))
    assert not k4.disconnects_without_points(k4.midpoint(0), k4.midpoint(5))
    with pytest.raises(GraphError):
        k4.disconnects_without_points(GraphPoint.vertex(0), GraphPoint.vertex(0))


def test_json_roundtrip():
    g = one_bridge_graph((1, Fraction(3, 2), 2, 5, 1, 7))
    h = MetricGraph.from_json(g.to_json())
    assert h.edges == g.edges and h.vertices == g.vertices


@st.composite
def refined_point(draw):
    g, _ = draw(st.sampled_from(NAMED[:4]))
    pts = [g.point(e, Fraction(k, 3) * g.length(e)) for e in sorted(g.edges) for k in (1, 2)]
    h, _ = g.subdivide(pts)
    e = draw(st.sampled_from(sorted(h.edges)))
    t = Fraction(draw(st.integers(0, 12)), 12) * h.length(e)
    return h, h.point(e, t)


@given(refined_point())
def test_model_map_roundtrip(data):
    h, p = data
    mm = ModelMap(h)
    q = mm.to_minimal(p)
    assert mm.to_refined(q) == p or (p.is_vertex and p.pos not in mm.minimal.incident)
    assert mm.to_minimal(mm.to_refined(q)) == q


def test_quartic_skeleta_shape(sample_curves):
    for cc in sample_curves:
        g = cc.skeleton.graph
        m = ModelMap(g).minimal
        assert g.genus() == 3
        assert len(m.vertices) == 4 and len(m.edges) == 6 and m.is_trivalent()
        assert not g.leaves()

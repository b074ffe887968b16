import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import discrete
from tropquartic.divisor import (Divisor, DivisorError, canonical_divisor, class_key, is_reduced,
                                 is_rigid, linearly_equivalent, random_divisor, rank,
                                 rank_determining_set, reduce_with_log, reduced_divisor,
                                 riemann_roch_residual)
from tropquartic.metricgraph import (GraphPoint, MetricGraph, circle, honeycomb_graph,
                                     mickey_mouse_graph, one_bridge_graph, path_graph, theta_graph,
                                     two_bridge_graph)

V = GraphPoint.vertex
GRAPHS = [circle(3), theta_graph(1, 2, 3), path_graph(1, 2), honeycomb_graph((1, 2, 3, 4, 5, 6)),
          mickey_mouse_graph((1, 2, 3, 5, 7, 3)), one_bridge_graph((2, 1, 3, 1, 2, 5)),
          two_bridge_graph((3, 1, 2, 5, 1, 4))]


def test_arithmetic_and_json():
    g = theta_graph(1, 2, 3)
    d = Divisor(g, {V(0): 2, g.midpoint(1): -1})
    assert d.degree() == 1 and not d.is_effective()
    assert (d - d).chips == {}
    assert 2 * d == d + d
    assert Divisor.from_json(g, d.to_json()) == d
    with pytest.raises(DivisorError):
        d + Divisor(theta_graph(), [V(0)])


def test_circle_points_are_not_equivalent():
    g = circle(3)
    p, q = g.point(0, 1), g.point(0, 2)
    assert not linearly_equivalent(Divisor(g, [p]), Divisor(g, [q]))
    # but 2p ~ p' + p'' when the midpoint is preserved
    assert linearly_equivalent(Divisor(g, [p, q]), Divisor(g, [g.point(0, Fraction(1, 2)),
                                                                  g.point(0, Fraction(5, 2))]))


def test_tree_points_are_equivalent():
    g = path_graph(1, 2)
    assert linearly_equivalent(Divisor(g, [V(0)]), Divisor(g, [g.point(1, Fraction(1, 3))]))


def test_canonical_rank_and_degree():
    for g in GRAPHS:
        K = canonical_divisor(g)
        assert K.degree() == 2 * g.genus() - 2
        assert rank(K) == g.genus() - 1


def test_rank_examples():
    g = theta_graph(1, 2, 3)
    assert rank(Divisor(g, [])) == 0
    assert rank(Divisor(g, [V(0)])) == 0
    assert rank(Divisor(g, [g.midpoint(0)]) - Divisor(g, [V(1)])) == -1
    assert rank(Divisor(g, [V(0), V(1)])) == 1


divisor_case = st.tuples(st.sampled_from(GRAPHS), st.integers(-2, 6), st.integers(0, 10**6))


@given(divisor_case)
def test_reduction_idempotent_and_reduced(case):
    g, deg, seed = case
    rng = random.Random(seed)
    d = random_divisor(g, deg, rng)
    q = V(g.vertices[rng.randrange(len(g.vertices))])
    r = reduced_divisor(d, q)
    assert r.degree() == d.degree()
    assert is_reduced(r, q)
    assert reduced_divisor(r, q) == r


@given(divisor_case)
def test_firing_log_replays(case):
    g, deg, seed = case
    rng = random.Random(seed)
    d = random_divisor(g, deg, rng)
    q = g.midpoint(sorted(g.edges)[0])
    r, log = reduce_with_log(d, q)
    x = d
    for move in log:
        x = x.apply(move)
        assert sum(move.principal_divisor(g).values()) == 0
    assert x == r


@given(divisor_case)
def test_equivalence_is_basepoint_independent(case):
    g, deg, seed = case
    rng = random.Random(seed)
    d = random_divisor(g, deg, rng)
    r = reduced_divisor(d, V(g.vertices[0]))
    for v in g.vertices:
        assert linearly_equivalent(d, r, V(v))


@given(divisor_case)
def test_riemann_roch(case):
    g, deg, seed = case
    d = random_divisor(g, deg, random.Random(seed))
    assert riemann_roch_residual(d) == 0


def _small_graphs():
    """Connected multigraphs with at most three edges, loops allowed, up to relabeling."""
    seen, out = set(), []
    for n in range(1, 5):
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        for m in range(0, 4):
            for es in itertools.combinations_with_replacement(pairs, m):
                g = discrete.Multigraph(n, es)
                used = {v for e in es for v in e} | ({0} if n == 1 else set())
                if len(used) != n or (n > 1 and None in discrete._bfs(g, 0)):
                    continue
                key = min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in es))
                          for p in itertools.permutations(range(n)))
                if (n, key) not in seen:
                    seen.add((n, key))
                    out.append((n, list(es)))
    return out


SMALL = _small_graphs()


def test_small_graph_catalog():
    # by vertex count: 1 -> 0..3 loops; 2 -> 7 shapes; 3 -> path, triangle and 3 decorated paths;
    # 4 -> path and star
    counts = [sum(1 for n, _ in SMALL if n == k) for k in (1, 2, 3, 4)]
    assert counts == [4, 7, 5, 2]


@pytest.mark.parametrize("n,edges", SMALL, ids=[f"{n}v-{e}" for n, e in SMALL])
def test_rank_matches_discrete_oracle(n, edges):
    if not edges:
        return
    N, sub = discrete.subdivide_twice(n, edges)
    dg = discrete.Multigraph(N, sub)
    mg = MetricGraph({i: (u, v, 1) for i, (u, v) in enumerate(edges)}, extra_vertices=tuple(range(n)))
    for coeffs in itertools.product(range(-1, 3), repeat=n):
        d = Divisor(mg, {V(v): c for v, c in enumerate(coeffs)})
        assert rank(d) == discrete.rank(dg, list(coeffs) + [0] * (N - n)), coeffs


def _dense_points(g, k=6):
    pts = [V(v) for v in g.vertices]
    for e in sorted(g.edges):
        pts += [g.point(e, g.length(e) * Fraction(i, k)) for i in range(1, k)]
    return sorted(set(pts))


@pytest.mark.parametrize("g", GRAPHS[1:], ids=lambda g: f"{len(g.edges)}e")
def test_rigidity_against_dense_sample(g):
    pts = _dense_points(g)
    rng = random.Random(11)
    pairs = list(itertools.combinations_with_replacement(pts, 2))
    for p, q in rng.sample(pairs, 25):
        d = Divisor(g, [p, q])
        kd = class_key(d)
        other = any(class_key(Divisor(g, [a, b])) == kd and Divisor(g, [a, b]) != d
                    for a, b in pairs)
        if is_rigid(d):
            assert not other
        else:
            assert other  # a mobile degree-2 class moves onto the sample grid


def test_rank_determining_sets_agree():
    rng = random.Random(3)
    for g in GRAPHS:
        for _ in range(5):
            d = random_divisor(g, rng.randint(0, 4), rng)
            assert rank(d) == rank(d, rank_determining_set(g, d, refined=True))


def test_rank_on_subdivided_graphs_matches_refined_set():
    rng = random.Random(4)
    for g in GRAPHS[3:]:
        h, _ = g.subdivide([g.point(e, g.length(e) / 3) for e in sorted(g.edges)])
        for _ in range(4):
            d = random_divisor(h, rng.randint(-1, 5), rng)
            assert rank(d) == rank(d, rank_determining_set(h, d, refined=True))

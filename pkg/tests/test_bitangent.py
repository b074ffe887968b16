import random
from fractions import Fraction
from pathlib import Path

import pytest

from tropquartic.bitangent import (bitangent_classes, bitangent_report, equivalent_bitangents,
                                   is_bitangent)
from tropquartic.divisor import Divisor, canonical_divisor, class_key
from tropquartic.lattice import interior_points, parse_heights, parse_triangulation
from tropquartic.metricgraph import ModelMap
from tropquartic.theta import ThetaCategory
from tropquartic.tropcurve import dual_curve, skeleton

DATA = Path(__file__).parent / "data"

# bitangent classes of the first orbit representative (a one-bridge curve)
ORBIT0_FAMILIES = {
    3: ((-11, 10), (-1, 0), 24),
    4: ((13, 18), (-1, 0), 16),
    5: ((9, 14), (-1, 0), 8),
    6: ((5, 10), (-1, 0), 8),
}


@pytest.fixture(scope="module")
def orbit0():
    t = parse_triangulation((DATA / "orbit0.tri").read_text())
    h = parse_heights((DATA / "orbit0.heights").read_text())
    c = dual_curve(t, h)
    return c, bitangent_classes(c)


def _minimal_key(sk, d):
    mm = ModelMap(sk.graph)
    return class_key(Divisor(mm.minimal, {mm.to_minimal(p): k for p, k in d.chips.items()}))


def _check_classes(c, classes):
    sk = skeleton(c)
    K = _minimal_key(sk, canonical_divisor(sk.graph))
    assert len(classes) == 7
    assert [b.theta.index for b in classes] == list(range(7))
    keys = set()
    for b in classes:
        r = b.representative
        assert r.profile in ((2, 2), (4,))
        assert r.tangency.divisor.degree() == 2
        assert _minimal_key(sk, 2 * r.tangency.divisor) == K
        assert _minimal_key(sk, r.tangency.divisor) == _minimal_key(sk, b.theta.refined)
        fresh = is_bitangent(r.vertex, c, sk)
        assert fresh is not None and b.theta.index in fresh.thetas
        keys.add(_minimal_key(sk, r.tangency.divisor))
    assert len(keys) == 7


def test_orbit0_classes(orbit0):
    c, classes = orbit0
    _check_classes(c, classes)
    cats = [b.theta.category for b in classes]
    assert cats.count(ThetaCategory.FLEXIBLE) == 3


def test_orbit0_families(orbit0):
    _, classes = orbit0
    got = {}
    for b in classes:
        f = b.representative.family
        if f is not None:
            got[b.theta.index] = (f.start, f.direction, f.length)
    assert got == ORBIT0_FAMILIES
    five = classes[5].representative
    assert five.vertex == (1, 14)
    assert five.profile == (2, 2)
    # one component is a segment, the other a point
    kinds = sorted(any(p.hi != p.lo for p in cm.pieces) for cm in five.tangency.components)
    assert kinds == [False, True]


def test_family_members_are_bitangent(orbit0):
    c, classes = orbit0
    sk = skeleton(c)
    rng = random.Random(11)
    for b in classes:
        f = b.representative.family
        if f is None:
            continue
        for v in f.sample(rng) + f.sample(rng):
            tg = is_bitangent(v, c, sk)
            assert tg is not None and b.theta.index in tg.thetas
        # just past the ends the class is lost
        for end, sign in ((f.start, -1), (f.vertex_at(f.length), 1)):
            out = (end[0] + sign * Fraction(1, 7) * f.direction[0],
                   end[1] + sign * Fraction(1, 7) * f.direction[1])
            tg = is_bitangent(out, c, sk)
            assert tg is None or b.theta.index not in tg.thetas


def test_sample_curves(sample_curves):
    for cc in sample_curves:
        classes = bitangent_classes(cc.curve, families=False)
        _check_classes(cc.curve, classes)


def test_equivalence_matches_theta(orbit0):
    _, classes = orbit0
    reps = [b.representative for b in classes]
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            assert equivalent_bitangents(a, b) == (i == j)
    f = reps[5].family
    c, _ = orbit0
    other = is_bitangent(f.vertex_at(Fraction(1, 3)), c, skeleton(c)).select(5, skeleton(c))
    assert class_key(other.divisor) == class_key(reps[5].tangency.divisor)


def _on_segment(p, a, z):
    cross = (z[0] - a[0]) * (p[1] - a[1]) - (z[1] - a[1]) * (p[0] - a[0])
    inside = min(a[0], z[0]) <= p[0] <= max(a[0], z[0]) and min(a[1], z[1]) <= p[1] <= max(a[1], z[1])
    return cross == 0 and inside


def test_middle_cycle_vertex_on_cycle(orbit_curves):
    cc = next(x for x in orbit_curves if x.orbit == 5)
    classes = bitangent_classes(cc.curve, families=False)
    mid = [b for b in classes if b.representative.method == "middle_cycle"]
    assert mid and all(b.theta.category == ThetaCategory.TANDEM for b in mid)
    c = cc.curve
    for b in mid:
        v = b.representative.vertex
        assert any(_on_segment(v, c.vertices[x.tail], c.vertices[x.head])
                   for x in c.bounded_edges
                   if any(p in x.dual for p in interior_points(4)))


def test_line_vertex_off_curve_is_not_bitangent(orbit0):
    c, _ = orbit0
    assert is_bitangent((1000, -1000), c) is None


def test_report_shape(orbit0):
    _, classes = orbit0
    rep = bitangent_report(classes)
    assert rep["infinite_families"] == 4
    assert {tuple(x["profile"]) for x in rep["classes"]} <= {(2, 2), (4,)}
    for x in rep["classes"]:
        assert ("family" in x) == x["infinite"] == (x["theta"] in ORBIT0_FAMILIES)

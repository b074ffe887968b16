"""Hyperellipticity of genus-3 skeletons.

A metric graph is hyperelliptic when it carries a divisor of degree 2 and
rank 1. The decision here combines three facts:

* the K4 (honeycomb) type is never hyperelliptic;
* the two edges of any 2-edge cut of a hyperelliptic graph have equal length;
* when it exists, the degree-2 rank-1 class is ``v + iota(v)`` for the
  hyperelliptic involution, which maps vertices of the minimal model to
  vertices, so vertex pairs (plus edge midpoints, for safety) suffice as
  witnesses.

For a quartic curve the middle cycle has a cut edge dual to the segment from
the interior point to the far boundary point, and the other cut edge is
always strictly longer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .divisor import Divisor, rank
from .lattice import LatticePoint, interior_points
from .metricgraph import CombinatorialType, GraphPoint, MetricGraph, ModelMap, classify_type
from .tropcurve import TropicalCurve, skeleton


class OutOfScope(ValueError):
    pass


class NotApplicable(ValueError):
    pass


class HyperellipticCurveFound(AssertionError):
    """A smooth quartic with hyperelliptic skeleton: contradicts the theorem."""


@dataclass
class HyperellipticVerdict:
    hyperelliptic: bool
    reason: str
    witness: Divisor | None = None
    unequal_cut: tuple | None = None  # (edge, edge, length, length) on the minimal model

    def to_json(self) -> dict:
        out = {"hyperelliptic": self.hyperelliptic, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.unequal_cut is not None:
            e1, e2, l1, l2 = self.unequal_cut
            out["unequal_cut"] = {"edges": [e1, e2], "lengths": [str(l1), str(l2)]}
        return out


def witness_candidates(m: MetricGraph) -> list:
    pts = [GraphPoint.vertex(v) for v in m.vertices]
    pts += [m.midpoint(e) for e in sorted(m.edges)]
    return pts


def degree_two_rank_one(g: MetricGraph, candidates=None) -> Divisor | None:
    """A divisor ``p + q`` of rank 1 with ``p, q`` among the candidates, if any."""
    pts = candidates if candidates is not None else witness_candidates(g)
    for p, q in combinations_with_replacement(pts, 2):
        d = Divisor(g, [p, q])
        if rank(d) >= 1:
            return d
    return None


def hyperelliptic_verdict(g: MetricGraph) -> HyperellipticVerdict:
    genus = g.genus()
    if genus < 2:
        raise OutOfScope(f"hyperellipticity is considered for genus >= 2, got {genus}")
    if genus == 2:
        return HyperellipticVerdict(True, "genus 2: the canonical class has degree 2 and rank 1")
    m = ModelMap(g).minimal
    if genus == 3 and classify_type(m) == CombinatorialType.HONEYCOMB:
        return HyperellipticVerdict(False, "honeycomb type")
    for e1, e2 in m.two_edge_cuts():
        if m.length(e1) != m.length(e2):
            return HyperellipticVerdict(False, "2-edge cut with unequal lengths",
                                        unequal_cut=(e1, e2, m.length(e1), m.length(e2)))
    w = degree_two_rank_one(m)
    if w is not None:
        return HyperellipticVerdict(True, "rank-1 divisor of degree 2", witness=w)
    return HyperellipticVerdict(False, "no rank-1 divisor of degree 2 among vertex and midpoint pairs")


def is_hyperelliptic(g: MetricGraph) -> bool:
    return hyperelliptic_verdict(g).hyperelliptic


@dataclass
class CutWitness:
    interior_point: LatticePoint
    e1: int              # minimal-model edge containing the curve edge dual to the segment
    e2: int
    e1_length: Fraction
    e2_length: Fraction
    e1_curve_edge: int

    def to_json(self) -> dict:
        return {"interior_point": list(self.interior_point), "e1": self.e1, "e2": self.e2,
                "e1_length": str(self.e1_length), "e2_length": str(self.e2_length),
                "e1_curve_edge": self.e1_curve_edge}


def far_point(p, d: int = 4) -> LatticePoint:
    """Boundary point opposite an interior point of the quartic triangle.

    In barycentric coordinates the entry 2 becomes 0 and the entries 1
    become 2; for (1,1) this is (2,2).
    """
    b = (p[0], p[1], d - p[0] - p[1])
    k = b.index(2)
    q = tuple(0 if i == k else 2 for i in range(3))
    return LatticePoint(q[0], q[1])


def cut_length_witness(c: TropicalCurve) -> CutWitness:
    """Lengths of the two cut edges of the middle cycle; the second is longer."""
    sk = skeleton(c)
    mm = ModelMap(sk.graph)
    m = mm.minimal
    kind = classify_type(m)
    if kind not in (CombinatorialType.MICKEY_MOUSE, CombinatorialType.ONE_BRIDGE,
                    CombinatorialType.TWO_BRIDGE):
        raise NotApplicable(f"no middle-cycle cut for type {kind.value}")
    cuts = m.two_edge_cuts()
    for p in interior_points(c.degree):
        seg = tuple(sorted((p, far_point(p, c.degree))))
        cell = next((x for x in c.bounded_edges if tuple(sorted(x.dual)) == seg), None)
        if cell is None or cell.id not in sk.graph.edges:
            continue
        me1 = mm.edge_to_minimal(cell.id)
        for a, b in cuts:
            if me1 in (a, b):
                me2 = b if a == me1 else a
                return CutWitness(p, me1, me2, m.length(me1), m.length(me2), cell.id)
    raise NotApplicable("no interior point has its far edge in a 2-edge cut")


def verify_nonhyperelliptic(c: TropicalCurve) -> HyperellipticVerdict:
    v = hyperelliptic_verdict(skeleton(c).graph)
    if v.hyperelliptic:
        raise HyperellipticCurveFound(f"hyperelliptic skeleton, witness {v.witness}")
    return v


def hyperelliptic_report(c: TropicalCurve) -> dict:
    v = hyperelliptic_verdict(skeleton(c).graph)
    out = {"schema": "tropquartic.hyperelliptic/1", "verdict": v.to_json()}
    try:
        out["cut_witness"] = cut_length_witness(c).to_json()
    except NotApplicable:
        out["cut_witness"] = None
    return out

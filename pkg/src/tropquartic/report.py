"""Single-curve report: everything known about one triangulation and lift."""

from __future__ import annotations

from fractions import Fraction

from .bitangent import bitangent_classes, bitangent_report
from .hyperelliptic import hyperelliptic_report
from .lattice import Triangulation, regular_heights
from .metricgraph import ModelMap, classify_type
from .theta import all_theta_characteristics, theta_report
from .tropcurve import dual_curve, skeleton

SCHEMA = "tropquartic.report/1"


def _fr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _plane(pt) -> list:
    return [_fr(pt[0]), _fr(pt[1])]


def curve_report(t: Triangulation, h: dict | None = None, families: bool = True) -> dict:
    """Deep report; plane coordinates are exact rationals written as strings."""
    h = regular_heights(t) if h is None else h
    c = dual_curve(t, h)
    sk = skeleton(c)
    g = sk.graph
    mm = ModelMap(g)
    thetas = all_theta_characteristics(g)
    classes = bitangent_classes(c, thetas, families=families)

    th = theta_report(g, thetas)
    for entry, t_ in zip(th["characteristics"], thetas):
        entry["chips_plane"] = [{"point": _plane(sk.embed(p)), "multiplicity": m}
                                for p, m in sorted(t_.refined.chips.items())]
    return {
        "schema": SCHEMA,
        "degree": t.degree,
        "triangulation": [[list(p) for p in tri] for tri in t.triangles],
        "heights": {f"{p[0]},{p[1]}": _fr(v) for p, v in sorted(h.items())},
        "curve": c.to_json(),
        "skeleton": {"edges": sorted(g.edges), "vertices": list(g.vertices),
                     "minimal_model": mm.minimal.to_json()},
        "combinatorial_type": classify_type(g).value,
        "theta": th,
        "bitangents": bitangent_report(classes),
        "hyperelliptic": hyperelliptic_report(c),
    }

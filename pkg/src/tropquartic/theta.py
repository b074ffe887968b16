"""Effective theta characteristics of metric graphs from Z/2 flows.

A nonzero flow S (an even subgraph) determines a divisor: measure the
distance to S, orient the rest of the graph away from S, and put a chip at
every point where two or more directions arrive, one fewer than the number
of arrivals. On a graph of genus g this produces the 2^g - 1 effective
theta characteristics, pairwise inequivalent.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from fractions import Fraction

from .divisor import (Divisor, canonical_divisor, class_key, is_rigid)
from .metricgraph import GraphPoint, MetricGraph, ModelMap


class InvalidFlow(ValueError):
    pass


class ThetaContractError(AssertionError):
    """A theorem-level check failed; indicates a bug or a counterexample."""


class ThetaCategory(enum.Enum):
    RIGID = "Rigid"
    FLEXIBLE = "Flexible"
    TANDEM = "Tandem"


@dataclass(frozen=True)
class Z2Flow:
    support: frozenset  # edge ids

    def is_even(self, g: MetricGraph) -> bool:
        deg = {v: 0 for v in g.vertices}
        for e in self.support:
            u, v, _ = g.edges[e]
            deg[u] += 1
            deg[v] += 1
        return all(x % 2 == 0 for x in deg.values())

    def __add__(self, other: "Z2Flow") -> "Z2Flow":
        return Z2Flow(self.support ^ other.support)

    def sorted_edges(self) -> list:
        return sorted(self.support)


def cycle_basis(g: MetricGraph) -> list[Z2Flow]:
    """Fundamental cycles of a BFS spanning tree rooted at the smallest vertex."""
    parent = {}
    root = g.vertices[0]
    parent[root] = (None, None)
    order = [root]
    tree = set()
    for x in order:
        for e, _ in g.incident[x]:
            u, v, _ = g.edges[e]
            y = v if u == x else u
            if y not in parent:
                parent[y] = (x, e)
                tree.add(e)
                order.append(y)

    def path_to_root(x):
        out = []
        while parent[x][0] is not None:
            out.append(parent[x][1])
            x = parent[x][0]
        return out

    basis = []
    for e in sorted(g.edges):
        if e in tree:
            continue
        u, v, _ = g.edges[e]
        s = {e}
        for f in path_to_root(u) + path_to_root(v):
            s ^= {f}
        basis.append(Z2Flow(frozenset(s)))
    return basis


def nonzero_flows(g: MetricGraph) -> list[Z2Flow]:
    """All nonzero elements of the cycle space, ordered by basis bitmask."""
    basis = cycle_basis(g)
    out = []
    for mask in range(1, 1 << len(basis)):
        s = frozenset()
        for i, b in enumerate(basis):
            if mask >> i & 1:
                s = s ^ b.support
        out.append(Z2Flow(s))
    return out


def distance_to_flow(g: MetricGraph, flow: Z2Flow) -> dict:
    dist: dict = {}
    heap = []
    for e in flow.support:
        u, v, _ = g.edges[e]
        heap += [(Fraction(0), u), (Fraction(0), v)]
    heapq.heapify(heap)
    while heap:
        d, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        for e, _ in g.incident[x]:
            u, v, L = g.edges[e]
            y = v if u == x else u
            if y not in dist:
                heapq.heappush(heap, (d + L, y))
    return dist


def zharkov_divisor(g: MetricGraph, flow: Z2Flow) -> Divisor:
    if not flow.support:
        raise InvalidFlow("the zero flow does not give an effective theta characteristic")
    if not flow.is_even(g):
        raise InvalidFlow(f"flow {sorted(flow.support)} is odd at some vertex")
    delta = distance_to_flow(g, flow)
    incoming = {v: 0 for v in g.vertices}
    chips: dict = {}
    for e in sorted(g.edges):
        if e in flow.support:
            continue
        u, v, L = g.edges[e]
        if delta[u] + L == delta[v]:
            incoming[v] += 1
        elif delta[v] + L == delta[u]:
            incoming[u] += 1
        else:
            p = g.point(e, (delta[v] + L - delta[u]) / 2)
            chips[p] = chips.get(p, 0) + 1
    for v, k in incoming.items():
        if k >= 2:
            p = GraphPoint.vertex(v)
            chips[p] = chips.get(p, 0) + k - 1
    return Divisor(g, chips)


@dataclass
class ThetaCharacteristic:
    """``divisor`` lives on the minimal model; ``refined`` on the input graph."""

    index: int
    flow: Z2Flow            # minimal-model edge ids
    divisor: Divisor
    refined: Divisor
    category: ThetaCategory | None = None
    on_vertex: bool = False  # some chip sits exactly on a vertex of the minimal model

    @property
    def points(self) -> list:
        out = []
        for p, c in sorted(self.divisor.chips.items()):
            out += [p] * c
        return out

    def to_json(self, mm: ModelMap | None = None) -> dict:
        out = {
            "index": self.index,
            "flow": sorted(self.flow.support),
            "divisor": self.divisor.to_json(),
            "skeleton_divisor": self.refined.to_json(),
            "category": self.category.value if self.category else None,
            "chip_on_vertex": self.on_vertex,
        }
        if mm is not None:
            out["skeleton_flow"] = sorted(mm.edges_to_refined(self.flow.support))
        return out


def all_theta_characteristics(g: MetricGraph, classify: bool = True,
                              check: bool = True) -> list[ThetaCharacteristic]:
    """Effective theta characteristics of ``g``, one per nonzero flow.

    Flows live on the minimal model. With ``check`` the degree, the relation
    2D ~ K and pairwise inequivalence are verified.
    """
    if g.genus() < 1:
        raise InvalidFlow("genus 0 graphs have no nonzero flows")
    mm = ModelMap(g)
    m = mm.minimal
    out = []
    for i, flow in enumerate(nonzero_flows(m)):
        d = zharkov_divisor(m, flow)
        refined = Divisor(g, {mm.to_refined(p): c for p, c in d.chips.items()})
        t = ThetaCharacteristic(i, flow, d, refined,
                                on_vertex=any(p.is_vertex for p in d.chips))
        out.append(t)
    if check:
        check_theta_contract(m, [t.divisor for t in out])
    if classify:
        for t in out:
            t.category = classify_theta(t)
    return out


def check_theta_contract(m: MetricGraph, divs: list) -> None:
    genus = m.genus()
    if len(divs) != 2 ** genus - 1:
        raise ThetaContractError(f"{len(divs)} characteristics for genus {genus}")
    K = canonical_divisor(m)
    kK = class_key(K)
    keys = set()
    for d in divs:
        if d.degree() != genus - 1 or not d.is_effective():
            raise ThetaContractError(f"{d} is not effective of degree {genus - 1}")
        if class_key(2 * d) != kK:
            raise ThetaContractError(f"2*{d} is not canonical")
        keys.add(class_key(d))
    if len(keys) != len(divs):
        raise ThetaContractError("two flows gave equivalent divisors")


def _on_bridge(m: MetricGraph, p: GraphPoint, bridges: set) -> bool:
    if p.is_vertex:
        return any(e in bridges for e, _ in m.incident[p.pos])
    return p.edge in bridges


def classify_theta(t: ThetaCharacteristic) -> ThetaCategory:
    """Flexible (a chip on a bridge), Tandem (mobile, support separates), or Rigid."""
    d = t.divisor
    m = d.graph
    bridges = set(m.bridges())
    supp = d.support()
    rigid = is_rigid(d)
    if any(_on_bridge(m, p, bridges) for p in supp):
        if rigid:
            raise ThetaContractError(f"{d} has a chip on a bridge yet is rigid")
        return ThetaCategory.FLEXIBLE
    if rigid:
        return ThetaCategory.RIGID
    separates = len(supp) == 2 and m.disconnects_without_points(*supp)
    if not separates:
        raise ThetaContractError(f"{d} is mobile but neither on a bridge nor separating")
    return ThetaCategory.TANDEM


def category_counts(thetas: list) -> tuple:
    c = [t.category for t in thetas]
    return (c.count(ThetaCategory.RIGID), c.count(ThetaCategory.FLEXIBLE),
            c.count(ThetaCategory.TANDEM))


def theta_report(g: MetricGraph, thetas: list) -> dict:
    mm = ModelMap(g)
    return {
        "schema": "tropquartic.theta/1",
        "minimal_model": mm.minimal.to_json(),
        "characteristics": [t.to_json(mm) for t in thetas],
        "counts": dict(zip(("Rigid", "Flexible", "Tandem"), category_counts(thetas))),
    }

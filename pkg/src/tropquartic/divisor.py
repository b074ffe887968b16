"""Divisors on metric graphs: chip firing, reduced divisors, rank.

A firing move fires a closed region by a rational distance: one chip leaves
each boundary point along each edge direction that exits the region and
stops ``amount`` further along. That is the principal divisor of
``-min(amount, dist(., region))``. Linear equivalence is witnessed by logs of
such moves rather than by storing rational functions.

Rigidity test (used by :func:`is_rigid`). Let D be effective and suppose
D' = D + div(f) is another effective divisor. The set U where f is maximal
is a closed proper subset, and at every boundary point of U the function
decreases along every exiting direction, so D must carry a chip there.
Hence every boundary point of U lies in supp(D), which makes U a union of
vertices and closed edges of any model containing supp(D) among its
vertices. The complement of U therefore contains a vertex or a whole open
edge of that model, hence a vertex or an edge midpoint q. Firing U by a
small amount keeps D effective away from q, so D is not q-reduced. So D is
rigid exactly when it is q-reduced for every vertex and every edge midpoint
of the model refined by supp(D).
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .metricgraph import GraphError, GraphPoint, MetricGraph, ModelMap

MAX_FIRINGS = 10**6


class DivisorError(ValueError):
    pass


class ReductionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Departure:
    """A chip leaving ``edge`` at ``offset`` in direction ``sign`` (+1 toward the head)."""

    edge: int
    offset: Fraction
    sign: int


@dataclass(frozen=True)
class FiringMove:
    region: frozenset  # nodes of the fired closed region
    amount: Fraction
    departures: tuple  # Departure per exiting direction

    def principal_divisor(self, g: MetricGraph) -> dict:
        out: dict = {}
        for dep in self.departures:
            a = g.point(dep.edge, dep.offset)
            b = g.point(dep.edge, dep.offset + dep.sign * self.amount)
            out[a] = out.get(a, 0) - 1
            out[b] = out.get(b, 0) + 1
        return {p: c for p, c in out.items() if c}


class Divisor:
    """Finite integer combination of points of a metric graph."""

    __slots__ = ("graph", "chips", "_hash")

    def __init__(self, graph: MetricGraph, chips: dict | Iterable = ()):
        self.graph = graph
        if not isinstance(chips, dict):
            acc: dict = {}
            for p in chips:
                acc[p] = acc.get(p, 0) + 1
            chips = acc
        self.chips = {p: int(c) for p, c in chips.items() if c}
        self._hash = None

    @classmethod
    def from_points(cls, graph, points) -> "Divisor":
        return cls(graph, list(points))

    def degree(self) -> int:
        return sum(self.chips.values())

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.chips.values())

    def support(self) -> list:
        return sorted(self.chips)

    def __getitem__(self, p) -> int:
        return self.chips.get(p, 0)

    def _check(self, other):
        if other.graph is not self.graph:
            raise DivisorError("divisors live on different graphs")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        out = dict(self.chips)
        for p, c in other.chips.items():
            out[p] = out.get(p, 0) + c
        return Divisor(self.graph, out)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __neg__(self) -> "Divisor":
        return Divisor(self.graph, {p: -c for p, c in self.chips.items()})

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor(self.graph, {p: k * c for p, c in self.chips.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and other.graph is self.graph and other.chips == self.chips

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.chips.items()))
        return self._hash

    def key(self) -> tuple:
        return tuple(sorted(self.chips.items()))

    def __repr__(self) -> str:
        if not self.chips:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{c}*{p!r}" for p, c in sorted(self.chips.items())) + ")"

    def apply(self, move: FiringMove) -> "Divisor":
        out = dict(self.chips)
        for p, c in move.principal_divisor(self.graph).items():
            out[p] = out.get(p, 0) + c
        return Divisor(self.graph, out)

    def to_json(self) -> list:
        rows = []
        for p, c in sorted(self.chips.items()):
            if p.is_vertex:
                rows.append({"vertex": p.pos, "coefficient": c})
            else:
                off = Fraction(p.pos)
                rows.append({"edge": p.edge, "offset": f"{off.numerator}/{off.denominator}",
                             "coefficient": c})
        return rows

    @classmethod
    def from_json(cls, graph: MetricGraph, rows: list) -> "Divisor":
        chips: dict = {}
        for r in rows:
            if "vertex" in r:
                p = GraphPoint.vertex(int(r["vertex"]))
            else:
                p = graph.point(int(r["edge"]), Fraction(r["offset"]))
            chips[p] = chips.get(p, 0) + int(r["coefficient"])
        return cls(graph, chips)


# --------------------------------------------------------------------------
# refined node structure


class _Nodes:
    """Segments of ``g`` cut at a set of points, with per-node incidences."""

    __slots__ = ("segs", "adj")

    def __init__(self, g: MetricGraph, points):
        by_edge: dict = {}
        for p in points:
            if p.edge != -1:
                by_edge.setdefault(p.edge, []).append(p.pos)
        segs = []  # (a, b, length, edge, off_a, off_b)
        adj: dict = {}
        for v in g.vertices:
            adj[GraphPoint(-1, v)] = []
        for e, (u, v, L) in g.edges.items():
            offs = by_edge.get(e)
            prev = GraphPoint(-1, u)
            prev_off = 0
            if offs:
                for t in sorted(set(offs)):
                    node = GraphPoint(e, t)
                    adj.setdefault(node, [])
                    segs.append((prev, node, t - prev_off, e, prev_off, t))
                    prev, prev_off = node, t
            segs.append((prev, GraphPoint(-1, v), L - prev_off, e, prev_off, L))
        for i, s in enumerate(segs):
            adj[s[0]].append((i, 0))
            adj[s[1]].append((i, 1))
        self.segs = segs
        self.adj = adj

    def burn(self, chips: dict, q) -> set:
        """Dhar burning from ``q``; returns the burnt nodes."""
        segs, adj = self.segs, self.adj
        burnt = {q}
        stack = [q]
        hits: dict = {}
        seg_done = [False] * len(segs)
        while stack:
            x = stack.pop()
            for si, end in adj[x]:
                if seg_done[si]:
                    continue
                seg_done[si] = True
                y = segs[si][1] if end == 0 else segs[si][0]
                if y in burnt:
                    continue
                h = hits.get(y, 0) + 1
                hits[y] = h
                if h > chips.get(y, 0):
                    burnt.add(y)
                    stack.append(y)
        return burnt

    def exits(self, region: set) -> list:
        """Departures ``(seg length, Departure)`` leaving ``region``."""
        out = []
        for a, b, L, e, oa, ob in self.segs:
            ina, inb = a in region, b in region
            if ina and not inb:
                out.append((L, Departure(e, oa, 1)))
            elif inb and not ina:
                out.append((L, Departure(e, ob, -1)))
        return out

    def distances(self, q) -> dict:
        dist = {q: Fraction(0)}
        heap = [(Fraction(0), 0, q)]
        tie = itertools.count(1)
        done = set()
        segs, adj = self.segs, self.adj
        while heap:
            d, _, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for si, end in adj[x]:
                y = segs[si][1] if end == 0 else segs[si][0]
                nd = d + segs[si][2]
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    heapq.heappush(heap, (nd, next(tie), y))
        return dist


def _fire(g: MetricGraph, chips: dict, region, exits, amount) -> FiringMove:
    deps = tuple(dep for _, dep in exits)
    for dep in deps:
        a = g.point(dep.edge, dep.offset)
        b = g.point(dep.edge, dep.offset + dep.sign * amount)
        chips[a] = chips.get(a, 0) - 1
        chips[b] = chips.get(b, 0) + 1
    for p in [p for p, c in chips.items() if c == 0]:
        del chips[p]
    return FiringMove(frozenset(region), Fraction(amount), deps)


def _nodes_for(chips: dict, q):
    pts = set(chips)
    pts.add(q)
    return pts


def _make_effective_away(g: MetricGraph, chips: dict, q, log: list | None) -> None:
    """Push debt toward ``q`` until every point other than ``q`` is non-negative."""
    steps = 0
    while True:
        neg = [p for p, c in chips.items() if c < 0 and p != q]
        if not neg:
            return
        nodes = _Nodes(g, _nodes_for(chips, q))
        dist = nodes.distances(q)
        x = max(neg, key=lambda p: (dist[p], p))
        dx = dist[x]
        region = {p for p, d in dist.items() if d < dx}
        exits = nodes.exits(region)
        # never overshoot the sphere through x
        amount = None
        for L, dep in exits:
            start = g.point(dep.edge, dep.offset)
            cap = min(L, dx - dist[start])
            if amount is None or cap < amount:
                amount = cap
        move = _fire(g, chips, region, exits, amount)
        if log is not None:
            log.append(move)
        steps += 1
        if steps > MAX_FIRINGS:
            raise ReductionError(f"debt pushing did not terminate; chips={chips}")


def reduce_with_log(d: Divisor, q: GraphPoint) -> tuple[Divisor, list]:
    """The ``q``-reduced divisor equivalent to ``d``, with the firing log."""
    return _reduce(d, q, [])


def reduced_divisor(d: Divisor, q: GraphPoint) -> Divisor:
    return _reduce(d, q, None)[0]


def _reduce(d: Divisor, q: GraphPoint, log):
    g = d.graph
    q = _canon(g, q)
    chips = dict(d.chips)
    _make_effective_away(g, chips, q, log)
    steps = 0
    while True:
        nodes = _Nodes(g, _nodes_for(chips, q))
        burnt = nodes.burn(chips, q)
        if len(burnt) == len(nodes.adj):
            return Divisor(g, chips), log
        region = set(nodes.adj) - burnt
        exits = nodes.exits(region)
        amount = min(L for L, _ in exits)
        move = _fire(g, chips, region, exits, amount)
        if log is not None:
            log.append(move)
        steps += 1
        if steps > MAX_FIRINGS:
            raise ReductionError(f"burning did not terminate from {q!r}; chips={chips}")


def _canon(g: MetricGraph, p: GraphPoint) -> GraphPoint:
    if p.is_vertex:
        if p.pos not in g.incident:
            raise GraphError(f"unknown vertex {p.pos}")
        return p
    return g.point(p.edge, p.pos)


def is_reduced(d: Divisor, q: GraphPoint) -> bool:
    q = _canon(d.graph, q)
    if any(c < 0 and p != q for p, c in d.chips.items()):
        return False
    nodes = _Nodes(d.graph, _nodes_for(d.chips, q))
    return len(nodes.burn(d.chips, q)) == len(nodes.adj)


def base_point(g: MetricGraph) -> GraphPoint:
    return GraphPoint.vertex(g.vertices[0])


def linearly_equivalent(d1: Divisor, d2: Divisor, q: GraphPoint | None = None) -> bool:
    if d1.graph is not d2.graph:
        raise DivisorError("divisors live on different graphs")
    if d1.degree() != d2.degree():
        return False
    q = q or base_point(d1.graph)
    return reduced_divisor(d1, q) == reduced_divisor(d2, q)


def class_key(d: Divisor, q: GraphPoint | None = None) -> tuple:
    """Hashable invariant of the linear equivalence class."""
    q = q or base_point(d.graph)
    return reduced_divisor(d, q).key()


def canonical_divisor(g: MetricGraph) -> Divisor:
    return Divisor(g, {GraphPoint.vertex(v): g.valence(v) - 2 for v in g.vertices})


def rank_determining_set(g: MetricGraph, d: Divisor | None = None, refined: bool = False) -> list:
    """Vertices of a loopless model, plus the support of ``d`` if given.

    ``refined=False`` uses the minimal model, which is smaller and still
    rank-determining.
    """
    base = g
    if not refined:
        m, chains = g.minimal_model()
        pts = [GraphPoint.vertex(v) for v in m.vertices]
        for e in sorted(m.edges):
            if m.is_loop(e):
                pts.append(_chain_midpoint(g, chains[e], m.length(e)))
    else:
        pts = base.loopless_vertex_set()
    if d is not None:
        pts += [p for p in d.support() if p not in pts]
    return sorted(set(pts))


def _chain_midpoint(g, chain, total):
    half = total / 2
    acc = Fraction(0)
    for e, forward in chain:
        L = g.length(e)
        if acc + L >= half:
            t = half - acc
            return g.point(e, t if forward else L - t)
        acc += L
    raise GraphError("empty chain")


def _on_minimal_model(d: Divisor) -> Divisor:
    """``d`` moved to the minimal model; rank only depends on the metric space."""
    g = d.graph
    if g.genus() < 2 or g.leaves() or all(g.valence(v) != 2 for v in g.vertices):
        return d
    mm = ModelMap(g)
    return Divisor(mm.minimal, {mm.to_minimal(p): c for p, c in d.chips.items()})


def rank(d: Divisor, A: list | None = None) -> int:
    """Baker–Norine rank, tested on a rank-determining set ``A``.

    Without ``A`` the computation runs on the minimal model, where
    reductions touch far fewer nodes.
    """
    if A is None:
        d = _on_minimal_model(d)
    g = d.graph
    q0 = base_point(g)
    A = A if A is not None else rank_determining_set(g, d)
    red = reduced_divisor(d, q0)
    if red[q0] < 0:
        return -1
    memo: dict = {}

    def r(eff: Divisor) -> int:
        key = reduced_divisor(eff, q0).key()
        if key in memo:
            return memo[key]
        best = eff.degree()
        for x in A:
            dx = reduced_divisor(eff, x)
            if dx[x] < 1:
                best = 0
                break
            best = min(best, 1 + r(dx - Divisor(g, {x: 1})))
            if best == 0:
                break
        memo[key] = best
        return best

    return r(red)


def riemann_roch_residual(d: Divisor) -> int:
    g = d.graph
    K = canonical_divisor(g)
    return rank(d) - rank(K - d) - d.degree() - 1 + g.genus()


def rigidity_test_points(d: Divisor) -> list:
    g = d.graph
    sub, pieces = g.subdivide(d.support())
    pts = [GraphPoint.vertex(v) for v in g.vertices] + [p for p in d.support() if not p.is_vertex]
    for e in sorted(g.edges):
        for k, (ne, start) in enumerate(pieces[e]):
            pts.append(g.point(e, start + sub.length(ne) / 2))
    return sorted(set(pts))


def is_rigid(d: Divisor) -> bool:
    """Is ``d`` the only effective divisor in its class?"""
    if not d.is_effective():
        raise DivisorError("rigidity is tested for effective divisors")
    return all(is_reduced(d, q) for q in rigidity_test_points(d))


def random_divisor(g: MetricGraph, degree: int, rng, npoints: int = 4, denominator: int = 4) -> Divisor:
    """Random divisor of the given degree with rational support points."""
    edges = sorted(g.edges)
    pts = []
    for _ in range(npoints):
        if rng.random() < 0.4:
            pts.append(GraphPoint.vertex(rng.choice(g.vertices)))
        else:
            e = rng.choice(edges)
            L = g.length(e)
            pts.append(g.point(e, L * Fraction(rng.randrange(denominator + 1), denominator)))
    coeffs = [rng.randint(-2, 3) for _ in pts]
    coeffs[-1] += degree - sum(coeffs)
    chips: dict = {}
    for p, c in zip(pts, coeffs):
        chips[p] = chips.get(p, 0) + c
    return Divisor(g, chips)

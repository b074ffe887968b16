"""Metric graphs with exact rational edge lengths.

Vertices and edge ids are integers. A point of the graph is a
:class:`GraphPoint`: either a vertex (``edge == -1``) or an interior point of
an edge at a rational offset measured from the edge's tail. Offsets equal to
0 or the edge length are always folded into the endpoint vertex, so every
point has exactly one representation.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple


class GraphError(ValueError):
    pass


class GraphPoint(NamedTuple):
    edge: int          # -1 for a vertex
    pos: Fraction | int  # vertex id, or offset from the edge tail

    @classmethod
    def vertex(cls, v: int) -> "GraphPoint":
        return cls(-1, v)

    @property
    def is_vertex(self) -> bool:
        return self.edge == -1

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"v{self.pos}"
        return f"e{self.edge}@{self.pos}"


class CombinatorialType(enum.Enum):
    HONEYCOMB = "Honeycomb"
    MICKEY_MOUSE = "MickeyMouse"
    ONE_BRIDGE = "OneBridge"
    TWO_BRIDGE = "TwoBridge"
    LOLLIPOP = "Lollipop"
    OTHER = "Other"


@dataclass
class MetricGraph:
    """Connected multigraph, loops allowed, positive rational lengths.

    ``edges`` maps an edge id to ``(tail, head, length)``.
    """

    edges: dict
    extra_vertices: tuple = ()
    embedding: dict | None = None  # vertex -> plane point, optional

    def __post_init__(self):
        self.edges = {e: (u, v, Fraction(L)) for e, (u, v, L) in self.edges.items()}
        for e, (u, v, L) in self.edges.items():
            if L <= 0:
                raise GraphError(f"edge {e} has non-positive length {L}")
        vs = set(self.extra_vertices)
        for u, v, _ in self.edges.values():
            vs.add(u)
            vs.add(v)
        self.vertices = sorted(vs)
        self.incident: dict = {v: [] for v in self.vertices}
        for e in sorted(self.edges):
            u, v, _ = self.edges[e]
            self.incident[u].append((e, 0))
            self.incident[v].append((e, 1))

    # -- points ----------------------------------------------------------

    def point(self, edge: int, offset) -> GraphPoint:
        """Canonical point at ``offset`` from the tail of ``edge``."""
        u, v, L = self.edges[edge]
        t = Fraction(offset)
        if t < 0 or t > L:
            raise GraphError(f"offset {t} outside edge {edge} of length {L}")
        if t == 0:
            return GraphPoint.vertex(u)
        if t == L:
            return GraphPoint.vertex(v)
        return GraphPoint(edge, t)

    def midpoint(self, edge: int) -> GraphPoint:
        return self.point(edge, self.edges[edge][2] / 2)

    def length(self, edge: int) -> Fraction:
        return self.edges[edge][2]

    def valence(self, v: int) -> int:
        return len(self.incident[v])

    def total_length(self) -> Fraction:
        return sum((L for _, _, L in self.edges.values()), Fraction(0))

    # -- topology --------------------------------------------------------

    def genus(self) -> int:
        if not self.is_connected():
            raise GraphError("genus is defined here for connected graphs only")
        return len(self.edges) - len(self.vertices) + 1

    def _components(self, removed_edges=frozenset()) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        n = len(self.vertices)
        for e, (u, v, _) in self.edges.items():
            if e in removed_edges:
                continue
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                n -= 1
        return n

    def is_connected(self) -> bool:
        return self._components() <= 1

    def is_loop(self, e: int) -> bool:
        return self.edges[e][0] == self.edges[e][1]

    def bridges(self) -> list[int]:
        return [e for e in sorted(self.edges) if self._components(frozenset((e,))) > 1]

    def two_edge_cuts(self) -> list[tuple[int, int]]:
        """Pairs of non-bridge edges whose joint removal disconnects."""
        br = set(self.bridges())
        cand = [e for e in sorted(self.edges) if e not in br]
        return [(a, b) for a, b in itertools.combinations(cand, 2)
                if self._components(frozenset((a, b))) > 1]

    def is_trivalent(self) -> bool:
        return all(self.valence(v) == 3 for v in self.vertices)

    def leaves(self) -> list[int]:
        return [v for v in self.vertices if self.valence(v) == 1]

    # -- models ----------------------------------------------------------

    def minimal_model(self) -> tuple["MetricGraph", dict]:
        """Suppress valence-2 vertices.

        Returns the minimal graph and ``chains``: minimal edge id -> list of
        ``(edge, forward)`` steps of this graph traversed tail to head. A
        cycle made only of valence-2 vertices keeps its smallest vertex and
        becomes a loop.
        """
        keep = {v for v in self.vertices if self.valence(v) != 2}
        used = set()
        new_edges = {}
        chains = {}
        nid = 0

        def walk(start, e, end):
            chain = []
            length = Fraction(0)
            cur_v, cur_e, cur_end = start, e, end
            while True:
                u, v, L = self.edges[cur_e]
                forward = cur_end == 0
                chain.append((cur_e, forward))
                used.add(cur_e)
                length += L
                nxt = v if forward else u
                if nxt in keep:
                    return nxt, chain, length
                # continue through the valence-2 vertex
                (e1, s1), (e2, s2) = self.incident[nxt]
                if e1 == cur_e and s1 == (1 if forward else 0):
                    cur_e, cur_end = e2, s2
                else:
                    cur_e, cur_end = e1, s1
                cur_v = nxt

        for v in sorted(keep):
            for e, end in self.incident[v]:
                if e in used:
                    continue
                w, chain, L = walk(v, e, end)
                chains[nid] = chain
                new_edges[nid] = (v, w, L)
                nid += 1
        # leftover pure cycles of valence-2 vertices become loops
        for e in sorted(self.edges):
            if e in used:
                continue
            cycle_vertices, seen, stack = set(), set(), [self.edges[e][0]]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                cycle_vertices.add(x)
                for f, _ in self.incident[x]:
                    a, b, _ = self.edges[f]
                    stack.extend((a, b))
            start = min(cycle_vertices)
            keep.add(start)
            f, end = self.incident[start][0]
            _, chain, L = walk(start, f, end)
            chains[nid] = chain
            new_edges[nid] = (start, start, L)
            nid += 1
        emb = None
        if self.embedding is not None:
            emb = {v: self.embedding[v] for v in keep if v in self.embedding}
        g = MetricGraph(new_edges, extra_vertices=tuple(sorted(keep)), embedding=emb)
        return g, chains

    def subdivide(self, points) -> tuple["MetricGraph", dict]:
        """Insert the given interior points as vertices.

        Returns the new graph and a map sending every old edge to a list of
        ``(new_edge, start_offset)`` pieces in tail-to-head order. New vertex
        ids continue after the current maximum.
        """
        by_edge: dict = {}
        for p in points:
            if not p.is_vertex:
                by_edge.setdefault(p.edge, set()).add(p.pos)
        next_v = max(self.vertices, default=-1) + 1
        next_e = 0
        new_edges = {}
        pieces = {}
        new_vertex_of = {}
        for e in sorted(self.edges):
            u, v, L = self.edges[e]
            offs = sorted(by_edge.get(e, ()))
            nodes = [u]
            for t in offs:
                new_vertex_of[GraphPoint(e, t)] = next_v
                nodes.append(next_v)
                next_v += 1
            nodes.append(v)
            cuts = [Fraction(0)] + offs + [L]
            pieces[e] = []
            for k in range(len(nodes) - 1):
                new_edges[next_e] = (nodes[k], nodes[k + 1], cuts[k + 1] - cuts[k])
                pieces[e].append((next_e, cuts[k]))
                next_e += 1
        g = MetricGraph(new_edges, extra_vertices=tuple(self.vertices))
        g.old_vertex_of_point = new_vertex_of
        return g, pieces

    def loopless_vertex_set(self) -> list[GraphPoint]:
        """Vertices plus loop midpoints: the vertex set of a loopless model."""
        pts = [GraphPoint.vertex(v) for v in self.vertices]
        pts += [self.midpoint(e) for e in sorted(self.edges) if self.is_loop(e)]
        return pts

    # -- distances -------------------------------------------------------

    def distances_from(self, p: GraphPoint) -> dict:
        """Shortest-path distance from ``p`` to every vertex."""
        dist = {}
        heap = []
        if p.is_vertex:
            heap.append((Fraction(0), p.pos))
        else:
            u, v, L = self.edges[p.edge]
            heap.append((p.pos, u))
            heap.append((L - p.pos, v))
        heapq.heapify(heap)
        while heap:
            d, v = heapq.heappop(heap)
            if v in dist:
                continue
            dist[v] = d
            for e, _ in self.incident[v]:
                a, b, L = self.edges[e]
                w = b if a == v else a
                if w not in dist:
                    heapq.heappush(heap, (d + L, w))
        return dist

    # -- point removal ---------------------------------------------------

    def disconnects_without_points(self, p: GraphPoint, q: GraphPoint) -> bool:
        """Is the graph minus the two points disconnected?"""
        if p == q:
            raise GraphError("points must be distinct")
        g, _ = self.subdivide([p, q])
        removed = set()
        for x in (p, q):
            removed.add(x.pos if x.is_vertex else g.old_vertex_of_point[x])
        # nodes: surviving vertices and every edge (its open interior survives)
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for v in g.vertices:
            if v not in removed:
                find(("v", v))
        for e, (u, v, _) in g.edges.items():
            find(("e", e))
            for w in (u, v):
                if w not in removed:
                    union(("e", e), ("v", w))
        roots = {find(x) for x in list(parent)}
        return len(roots) > 1

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "vertices": list(self.vertices),
            "edges": [{"id": e, "tail": u, "head": v, "length": _frac(L)}
                      for e, (u, v, L) in sorted(self.edges.items())],
        }
        if self.embedding:
            out["embedding"] = {str(v): [_frac(c) for c in xy] for v, xy in sorted(self.embedding.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "MetricGraph":
        edges = {int(d["id"]): (int(d["tail"]), int(d["head"]), Fraction(d["length"]))
                 for d in data["edges"]}
        emb = None
        if "embedding" in data:
            emb = {int(v): tuple(Fraction(c) for c in xy) for v, xy in data["embedding"].items()}
        return cls(edges, extra_vertices=tuple(data.get("vertices", ())), embedding=emb)


class ModelMap:
    """Point translation between a graph and its minimal model."""

    def __init__(self, g: MetricGraph):
        self.refined = g
        self.minimal, self.chains = g.minimal_model()
        # refined edge -> (minimal edge, offset of its start along the chain, forward)
        self._place: dict = {}
        for me, chain in self.chains.items():
            acc = Fraction(0)
            for e, forward in chain:
                self._place[e] = (me, acc, forward)
                acc += g.length(e)

    def to_minimal(self, p: GraphPoint) -> GraphPoint:
        g = self.refined
        if p.is_vertex:
            if p.pos in self.minimal.incident:
                return p
            e, _ = g.incident[p.pos][0]
            u, v, L = g.edges[e]
            p = GraphPoint(e, Fraction(0) if u == p.pos else L)
        me, start, forward = self._place[p.edge]
        t = p.pos if forward else g.length(p.edge) - p.pos
        return self.minimal.point(me, start + t)

    def to_refined(self, p: GraphPoint) -> GraphPoint:
        if p.is_vertex:
            return p
        acc = Fraction(0)
        for e, forward in self.chains[p.edge]:
            L = self.refined.length(e)
            if acc + L >= p.pos:
                t = p.pos - acc
                return self.refined.point(e, t if forward else L - t)
            acc += L
        raise GraphError(f"offset {p.pos} beyond chain of edge {p.edge}")

    def edges_to_refined(self, edges) -> frozenset:
        return frozenset(e for me in edges for e, _ in self.chains[me])

    def edge_to_minimal(self, e: int) -> int:
        return self._place[e][0]


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def genus(g: MetricGraph) -> int:
    return g.genus()


def classify_type(g: MetricGraph) -> CombinatorialType:
    """Homeomorphism class among the trivalent leafless genus-3 graphs."""
    if not g.is_connected() or g.genus() != 3:
        return CombinatorialType.OTHER
    m, _ = g.minimal_model()
    if not m.is_trivalent() or len(m.vertices) != 4 or len(m.edges) != 6:
        return CombinatorialType.OTHER
    loops = sum(1 for e in m.edges if m.is_loop(e))
    nbridges = len(m.bridges())
    if loops != nbridges:
        return CombinatorialType.OTHER
    if loops == 0:
        pairs = {}
        for u, v, _ in m.edges.values():
            k = (min(u, v), max(u, v))
            pairs[k] = pairs.get(k, 0) + 1
        return CombinatorialType.MICKEY_MOUSE if max(pairs.values()) > 1 else CombinatorialType.HONEYCOMB
    return {1: CombinatorialType.ONE_BRIDGE, 2: CombinatorialType.TWO_BRIDGE,
            3: CombinatorialType.LOLLIPOP}[loops]


# -- small named graphs used in tests and examples --------------------------


def circle(length=1) -> MetricGraph:
    return MetricGraph({0: (0, 0, length)})


def theta_graph(a=1, b=1, c=1) -> MetricGraph:
    return MetricGraph({0: (0, 1, a), 1: (0, 1, b), 2: (0, 1, c)})


def path_graph(*lengths) -> MetricGraph:
    return MetricGraph({i: (i, i + 1, L) for i, L in enumerate(lengths)})


def honeycomb_graph(lengths=(1, 1, 1, 1, 1, 1)) -> MetricGraph:
    """K4."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    return MetricGraph({i: (u, v, L) for i, ((u, v), L) in enumerate(zip(pairs, lengths))})


def mickey_mouse_graph(lengths=(1, 2, 1, 1, 2, 1)) -> MetricGraph:
    """Cycle 0-1-2-3 with the pairs 0-1 and 2-3 doubled.

    Edge order: 0-1, 0-1, 1-2, 2-3, 2-3, 3-0. The 2-edge cut is {2, 5}.
    """
    pairs = [(0, 1), (0, 1), (1, 2), (2, 3), (2, 3), (3, 0)]
    return MetricGraph({i: (u, v, L) for i, ((u, v), L) in enumerate(zip(pairs, lengths))})


def one_bridge_graph(lengths=(1, 1, 1, 1, 1, 2)) -> MetricGraph:
    """Loop at 0, bridge 0-1, then 1-2, 1-3 and a doubled 2-3.

    Edge order: loop, bridge, 1-2, 1-3, 2-3, 2-3.
    """
    pairs = [(0, 0), (0, 1), (1, 2), (1, 3), (2, 3), (2, 3)]
    return MetricGraph({i: (u, v, L) for i, ((u, v), L) in enumerate(zip(pairs, lengths))})


def two_bridge_graph(lengths=(1, 1, 1, 2, 1, 1)) -> MetricGraph:
    """Loop at 0, bridge 0-1, doubled 1-2, bridge 2-3, loop at 3."""
    pairs = [(0, 0), (0, 1), (1, 2), (1, 2), (2, 3), (3, 3)]
    return MetricGraph({i: (u, v, L) for i, ((u, v), L) in enumerate(zip(pairs, lengths))})


def lollipop_graph(lengths=(1, 1, 1, 1, 1, 1)) -> MetricGraph:
    """Claw with a loop at each of its three leaves."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)]
    return MetricGraph({i: (u, v, L) for i, ((u, v), L) in enumerate(zip(pairs, lengths))})

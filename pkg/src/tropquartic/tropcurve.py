"""Embedded tropical plane curves, tropical lines and stable intersections.

Coordinates are exact :class:`~fractions.Fraction` pairs. A curve is stored
as vertices plus *cells*: bounded edges (``head`` is a vertex index) and rays
(``head is None``). Each cell carries its primitive direction from the tail,
its lattice length (None for rays), its weight and the dual lattice edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .lattice import LatticePoint, Triangulation, folds
from .metricgraph import GraphPoint, MetricGraph

# Perturbation directions for stable intersection. Their slopes are not the
# slope of any primitive vector with entries of absolute value <= 12.
PERTURBATION = (Fraction(1), Fraction(13, 29))
PERTURBATION_ALT = (Fraction(1), Fraction(-17, 31))

LINE_RAYS = ((-1, 0), (0, -1), (1, 1))


class InconsistentLift(ValueError):
    pass


class CurveMismatch(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def P(x, y) -> tuple:
    return (Fraction(x), Fraction(y))


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def _primitive(v):
    g = gcd(int(v[0]), int(v[1]))
    return (v[0] // g, v[1] // g)


@dataclass(frozen=True)
class Cell:
    id: int
    tail: int
    head: int | None
    direction: tuple
    length: Fraction | None
    dual: tuple
    weight: int = 1

    @property
    def is_ray(self) -> bool:
        return self.head is None


@dataclass
class TropicalCurve:
    degree: int
    vertices: list          # plane points
    vertex_duals: list      # dual lattice triangle per vertex
    cells: list             # Cell, bounded edges first
    triangulation: Triangulation | None = None
    heights: dict | None = None

    @property
    def bounded_edges(self) -> list:
        return [c for c in self.cells if not c.is_ray]

    @property
    def rays(self) -> list:
        return [c for c in self.cells if c.is_ray]

    def point_on(self, cell: Cell, t) -> tuple:
        b = self.vertices[cell.tail]
        return (b[0] + t * cell.direction[0], b[1] + t * cell.direction[1])

    def endpoint(self, cell: Cell) -> tuple | None:
        return None if cell.is_ray else self.vertices[cell.head]

    @cached_property
    def _vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def locate(self, x) -> tuple:
        """``('v', index)`` or ``('c', cell id, t)`` for a point of the curve."""
        x = (Fraction(x[0]), Fraction(x[1]))
        i = self._vertex_index.get(x)
        if i is not None:
            return ("v", i)
        for c in self.cells:
            t = _param_on(self.vertices[c.tail], c.direction, c.length, x)
            if t is not None:
                return ("c", c.id, t)
        raise CurveMismatch(f"point {x} is not on the curve")

    def incidence(self) -> dict:
        out: dict = {i: [] for i in range(len(self.vertices))}
        for c in self.cells:
            out[c.tail].append((c.id, 1))
            if c.head is not None:
                out[c.head].append((c.id, -1))
        return out

    def to_json(self) -> dict:
        def fr(v):
            v = Fraction(v)
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

        return {
            "schema": "tropquartic.curve/1",
            "degree": self.degree,
            "vertices": [{"id": i, "point": [fr(p[0]), fr(p[1])],
                          "dual": [list(q) for q in self.vertex_duals[i]]}
                         for i, p in enumerate(self.vertices)],
            "edges": [{"id": c.id, "tail": c.tail, "head": c.head, "direction": list(c.direction),
                       "weight": c.weight, "lattice_length": fr(c.length),
                       "dual": [list(q) for q in c.dual]} for c in self.bounded_edges],
            "rays": [{"id": c.id, "tail": c.tail, "direction": list(c.direction),
                      "weight": c.weight, "dual": [list(q) for q in c.dual]} for c in self.rays],
        }


def _param_on(base, u, length, x):
    """Parameter ``t`` with ``x = base + t u`` inside the cell, else None."""
    d = (x[0] - base[0], x[1] - base[1])
    if _cross(d, u) != 0:
        return None
    t = Fraction(_dot(d, u), _dot(u, u))
    if t < 0 or (length is not None and t > length):
        return None
    return t


# --------------------------------------------------------------------------
# construction


def _triangle_vertex(tri, h) -> tuple:
    a, b, c = tri
    # (b - a).x = h(b) - h(a), (c - a).x = h(c) - h(a)
    m11, m12, r1 = b[0] - a[0], b[1] - a[1], Fraction(h[b]) - Fraction(h[a])
    m21, m22, r2 = c[0] - a[0], c[1] - a[1], Fraction(h[c]) - Fraction(h[a])
    det = m11 * m22 - m12 * m21
    return ((r1 * m22 - m12 * r2) / det, (m11 * r2 - r1 * m21) / det)


def _outward_normal(e, apex) -> tuple:
    a, b = e
    n = (b[1] - a[1], a[0] - b[0])
    if _dot(n, (apex[0] - a[0], apex[1] - a[1])) > 0:
        n = (-n[0], -n[1])
    return _primitive(n)


def dual_curve(t: Triangulation, h: dict) -> TropicalCurve:
    """Tropical curve of ``min_p (h(p) - <p, x>)`` dual to the triangulation ``t``."""
    f = folds(t, h)
    bad = [e for e, v in f.items() if v <= 0]
    if bad:
        raise InconsistentLift(f"heights do not induce the triangulation across {bad[:3]}")
    verts = [_triangle_vertex(tri, h) for tri in t.triangles]
    cells = []
    for e in t.interior_edges:
        i, j = t.edges[e]
        apex = next(p for p in t.triangles[i] if p not in e)
        n = _outward_normal(e, apex)
        d = (verts[j][0] - verts[i][0], verts[j][1] - verts[i][1])
        lam = Fraction(_dot(d, n), _dot(n, n))
        if lam <= 0 or _cross(d, n) != 0:
            raise InconsistentLift(f"edge dual to {e} has non-positive length")
        cells.append(Cell(len(cells), i, j, n, lam, e))
    for e in t.boundary_edges:
        (i,) = t.edges[e]
        apex = next(p for p in t.triangles[i] if p not in e)
        cells.append(Cell(len(cells), i, None, _outward_normal(e, apex), None, e))
    return TropicalCurve(t.degree, verts, list(t.triangles), cells, t, dict(h))


def tropical_line(vertex) -> TropicalCurve:
    """Tropical line with the given vertex (a smooth degree-1 curve)."""
    v = (Fraction(vertex[0]), Fraction(vertex[1]))
    o, ex, ey = LatticePoint(0, 0), LatticePoint(1, 0), LatticePoint(0, 1)
    cells = [Cell(0, 0, None, (-1, 0), None, (o, ey)),
             Cell(1, 0, None, (0, -1), None, (o, ex)),
             Cell(2, 0, None, (1, 1), None, (ex, ey))]
    return TropicalCurve(1, [v], [(o, ex, ey)], cells)


def check_balancing(c: TropicalCurve) -> bool:
    acc = {i: [0, 0] for i in range(len(c.vertices))}
    for cell in c.cells:
        w, (dx, dy) = cell.weight, cell.direction
        acc[cell.tail][0] += w * dx
        acc[cell.tail][1] += w * dy
        if cell.head is not None:
            acc[cell.head][0] -= w * dx
            acc[cell.head][1] -= w * dy
    return all(v == [0, 0] for v in acc.values())


def is_smooth(c: TropicalCurve) -> bool:
    """Weights 1, trivalent, ``d`` rays in each standard direction."""
    if any(cell.weight != 1 for cell in c.cells):
        return False
    if any(len(v) != 3 for v in c.incidence().values()):
        return False
    counts = {}
    for r in c.rays:
        counts[r.direction] = counts.get(r.direction, 0) + 1
    return counts == {d: c.degree for d in LINE_RAYS}


# --------------------------------------------------------------------------
# stable intersection


@dataclass
class IntersectionDivisor:
    points: list  # (plane point, multiplicity), sorted

    def degree(self) -> int:
        return sum(m for _, m in self.points)

    def as_dict(self) -> dict:
        return dict(self.points)


def _crossings(a: TropicalCurve, b: TropicalCurve, w):
    """Transverse crossings of ``a`` with ``b + eps*w`` for small eps > 0.

    Yields ``(limit point, multiplicity, cell_a, s0)``.
    """
    for ca in a.cells:
        ua = ca.direction
        pa = a.vertices[ca.tail]
        for cb in b.cells:
            ub = cb.direction
            X = _cross(ua, ub)
            if X == 0:
                continue
            pb = b.vertices[cb.tail]
            r0 = (pb[0] - pa[0], pb[1] - pa[1])
            s0 = _cross(r0, ub) / X
            s1 = _cross(w, ub) / X
            t0 = _cross(r0, ua) / X
            t1 = _cross(w, ua) / X
            if not _in_range(s0, s1, ca.length) or not _in_range(t0, t1, cb.length):
                continue
            pt = (pa[0] + s0 * ua[0], pa[1] + s0 * ua[1])
            yield pt, ca.weight * cb.weight * abs(X), ca, s0


def _in_range(p0, p1, length) -> bool:
    if p1 == 0:
        raise ValueError("perturbation direction is not generic for these curves")
    if p0 < 0 or (p0 == 0 and p1 < 0):
        return False
    if length is not None and (p0 > length or (p0 == length and p1 > 0)):
        return False
    return True


def stable_intersection(a: TropicalCurve, b: TropicalCurve, w=PERTURBATION) -> IntersectionDivisor:
    """Stable intersection as a limit of generic translates ``b + eps*w``."""
    acc: dict = {}
    for pt, m, _, _ in _crossings(a, b, w):
        acc[pt] = acc.get(pt, 0) + m
    return IntersectionDivisor(sorted(acc.items()))


# --------------------------------------------------------------------------
# tropical lines through two points


@dataclass(frozen=True)
class LineFamily:
    """Lines whose vertices fill ``start + s*direction`` for ``0 <= s <= length``."""

    start: tuple
    direction: tuple
    length: Fraction | None  # None: unbounded

    def vertex_at(self, s) -> tuple:
        return (self.start[0] + s * self.direction[0], self.start[1] + s * self.direction[1])

    def endpoints(self) -> list:
        out = [self.start]
        if self.length is not None:
            out.append(self.vertex_at(self.length))
        return out

    def sample(self, rng=None) -> list:
        """Endpoints plus one interior vertex (a random rational if ``rng`` given)."""
        pts = self.endpoints()
        if self.length is None:
            s = Fraction(rng.randint(1, 40), rng.randint(1, 7)) if rng else Fraction(1)
        else:
            s = self.length * (Fraction(rng.randint(1, 99), 100) if rng else Fraction(1, 2))
        pts.append(self.vertex_at(s))
        return pts

    def canonical_vertex(self) -> tuple:
        return min(self.endpoints())


_REVERSED = ((1, 0), (0, 1), (-1, -1))


def tropical_lines_through(p, q):
    """The tropical line through ``p`` and ``q``, or the family of them.

    The vertex must lie on both reversed lines ``x - rays``; intersecting
    them ray by ray gives a point, a segment or a ray.
    """
    p = (Fraction(p[0]), Fraction(p[1]))
    q = (Fraction(q[0]), Fraction(q[1]))
    if p == q:
        raise DegenerateInput("a tropical line through a single point is a two-parameter family")
    pieces = []  # (point, direction, length) with length 0 for points
    for u in _REVERSED:
        for v in _REVERSED:
            X = _cross(u, v)
            r0 = (q[0] - p[0], q[1] - p[1])
            if X != 0:
                s = _cross(r0, v) / X
                t = _cross(r0, u) / X
                if s >= 0 and t >= 0:
                    pieces.append(((p[0] + s * u[0], p[1] + s * u[1]), u, Fraction(0)))
            elif u == v and _cross(r0, u) == 0:
                # same direction, collinear: overlap starts at the farther base
                k = Fraction(_dot(r0, u), _dot(u, u))
                start = q if k >= 0 else p
                pieces.append((start, u, None))
    segs = [x for x in pieces if x[2] is None or x[2] > 0]
    if not segs:
        pts = {x[0] for x in pieces}
        if len(pts) != 1:
            raise AssertionError(f"lines through {p}, {q}: vertex set {pts}")
        return tropical_line(pts.pop())
    if len(segs) != 1:
        raise AssertionError(f"lines through {p}, {q}: several families {segs}")
    start, u, _ = segs[0]
    return LineFamily(start, u, None)


# --------------------------------------------------------------------------
# set-theoretic intersection with a line


@dataclass
class Piece:
    """Part of ``L ∩ C`` on the line ray ``ray`` for parameters ``lo..hi``."""

    ray: int
    lo: Fraction
    hi: Fraction | None  # None: unbounded


@dataclass
class Component:
    pieces: list
    stable: list = field(default_factory=list)  # (ray, param, point, mult)

    @property
    def multiplicity(self) -> int:
        return sum(m for *_, m in self.stable)


def line_point(vertex, ray: int, s) -> tuple:
    u = LINE_RAYS[ray]
    return (vertex[0] + s * u[0], vertex[1] + s * u[1])


def _piece_contains(piece: Piece, ray: int, s) -> bool:
    if s == 0:
        return piece.lo == 0  # the line vertex sits at parameter 0 of every ray
    return ray == piece.ray and piece.lo <= s and (piece.hi is None or s <= piece.hi)


def _pieces_touch(a: Piece, b: Piece) -> bool:
    if a.ray == b.ray:
        if a.hi is not None and a.hi < b.lo:
            return False
        if b.hi is not None and b.hi < a.lo:
            return False
        return True
    return a.lo == 0 and b.lo == 0


def intersection_components(vertex, c: TropicalCurve, w=PERTURBATION) -> list[Component]:
    """Connected components of ``L ∩ C`` with their stable intersection points."""
    v = (Fraction(vertex[0]), Fraction(vertex[1]))
    pieces = []
    for k, r in enumerate(LINE_RAYS):
        for cell in c.cells:
            u = cell.direction
            base = c.vertices[cell.tail]
            X = _cross(r, u)
            r0 = (base[0] - v[0], base[1] - v[1])
            if X != 0:
                s = _cross(r0, u) / X
                t = _cross(r0, r) / X
                if s >= 0 and t >= 0 and (cell.length is None or t <= cell.length):
                    pieces.append(Piece(k, s, s))
            elif _cross(r0, r) == 0:
                rr = _dot(r, r)
                s_a = Fraction(_dot(r0, r), rr)
                sign = 1 if _dot(u, r) > 0 else -1
                if cell.length is None:
                    if sign > 0:
                        lo, hi = max(s_a, Fraction(0)), None
                    else:
                        lo, hi = Fraction(0), s_a
                else:
                    end = c.endpoint(cell)
                    s_b = Fraction(_dot((end[0] - v[0], end[1] - v[1]), r), rr)
                    lo, hi = max(min(s_a, s_b), Fraction(0)), max(s_a, s_b)
                if hi is None or hi >= lo:
                    pieces.append(Piece(k, lo, hi))
    # union-find over pieces
    n = len(pieces)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if _pieces_touch(pieces[i], pieces[j]):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(pieces[i])
    comps = [Component(g) for _, g in sorted(groups.items())]
    line = tropical_line(v)
    for pt, m, ca, s0 in _crossings(line, c, w):
        ray = ca.id
        for comp in comps:
            if any(_piece_contains(pc, ray, s0) for pc in comp.pieces):
                comp.stable.append((ray, s0, pt, m))
                break
        else:
            raise AssertionError(f"stable point {pt} outside L ∩ C")
    comps.sort(key=lambda cm: min((pc.ray, pc.lo) for pc in cm.pieces))
    return comps


# --------------------------------------------------------------------------
# skeleton and pushing divisors


@dataclass
class Skeleton:
    graph: MetricGraph          # refined model: curve vertices / curve edge ids
    attach: dict                # curve vertex -> skeleton vertex it retracts to
    cell_attach: dict           # non-skeleton cell id -> skeleton vertex
    curve: TropicalCurve

    def retract(self, loc) -> GraphPoint:
        """Skeleton point that a curve location retracts to."""
        if loc[0] == "v":
            return GraphPoint.vertex(self.attach[loc[1]])
        _, cid, t = loc
        if cid in self.graph.edges:
            return self.graph.point(cid, t)
        return GraphPoint.vertex(self.cell_attach[cid])

    def embed(self, p: GraphPoint) -> tuple:
        if p.is_vertex:
            return self.curve.vertices[p.pos]
        return self.curve.point_on(self.curve.cells[p.edge], p.pos)


def skeleton(c: TropicalCurve) -> Skeleton:
    """Prune rays and leaf edges; the remaining bounded edges keep lattice lengths.

    A curve that prunes to nothing (genus 0) gets a one-vertex graph.
    """
    alive = {cell.id for cell in c.bounded_edges}
    deg = {i: 0 for i in range(len(c.vertices))}
    for cid in alive:
        cell = c.cells[cid]
        deg[cell.tail] += 1
        deg[cell.head] += 1
    changed = True
    last = 0
    while changed:
        changed = False
        for cid in sorted(alive):
            cell = c.cells[cid]
            if deg[cell.tail] == 1 or deg[cell.head] == 1:
                alive.discard(cid)
                deg[cell.tail] -= 1
                deg[cell.head] -= 1
                last = cell.tail if deg[cell.tail] > 0 else cell.head
                changed = True
    edges = {cid: (c.cells[cid].tail, c.cells[cid].head, c.cells[cid].length) for cid in sorted(alive)}
    skel_vertices = {v for e in edges.values() for v in e[:2]}
    if not skel_vertices:
        skel_vertices = {last}
    g = MetricGraph(edges, extra_vertices=tuple(sorted(skel_vertices)),
                    embedding={v: c.vertices[v] for v in skel_vertices})
    # retraction of the trees hanging off the skeleton
    attach = {v: v for v in skel_vertices}
    inc = c.incidence()
    stack = sorted(skel_vertices)
    while stack:
        x = stack.pop()
        for cid, _ in inc[x]:
            cell = c.cells[cid]
            if cell.is_ray or cid in alive:
                continue
            y = cell.head if cell.tail == x else cell.tail
            if y not in attach:
                attach[y] = attach[x]
                stack.append(y)
    cell_attach = {}
    for cell in c.cells:
        if cell.id not in alive:
            cell_attach[cell.id] = attach[cell.tail]
    return Skeleton(g, attach, cell_attach, c)


def push_to_metric(sk: Skeleton, div: IntersectionDivisor | dict | list):
    """Divisor on the skeleton obtained by retracting each chip to it."""
    from .divisor import Divisor

    items = div.points if isinstance(div, IntersectionDivisor) else (
        list(div.items()) if isinstance(div, dict) else list(div))
    chips: dict = {}
    for pt, m in items:
        p = sk.retract(sk.curve.locate(pt))
        chips[p] = chips.get(p, 0) + m
    return Divisor(sk.graph, chips)


def sigma_graph(c: TropicalCurve, points) -> tuple[MetricGraph, object]:
    """Compact connected piece of the curve containing the skeleton and ``points``.

    All bounded edges plus, on each ray, the segment reaching the farthest
    given point (at least length 1). Returns the graph and a locator that
    maps plane points of ``c`` to points of the graph.
    """
    far: dict = {}
    for pt in points:
        loc = c.locate(pt)
        if loc[0] == "c" and c.cells[loc[1]].is_ray:
            far[loc[1]] = max(far.get(loc[1], Fraction(1)), loc[2])
    edges = {cell.id: (cell.tail, cell.head, cell.length) for cell in c.bounded_edges}
    nv = len(c.vertices)
    for cell in c.rays:
        L = far.get(cell.id, Fraction(1))
        edges[cell.id] = (cell.tail, nv + cell.id, L)
    g = MetricGraph(edges)

    def locate(pt) -> GraphPoint:
        loc = c.locate(pt)
        if loc[0] == "v":
            return GraphPoint.vertex(loc[1])
        return g.point(loc[1], loc[2])

    return g, locate

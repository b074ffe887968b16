"""Bitangent tropical lines of smooth plane quartics.

A line is bitangent when ``L ∩ C`` has two components of stable
multiplicity 2 or one of multiplicity 4. Half of the stable intersection,
pushed to the skeleton, is the tangency divisor; its class is a theta
characteristic. Each of the 7 effective theta characteristics yields a
bitangent through one of these constructions, tried in order:

* ``through_chips``: any tropical line through the two chips (or a line
  with its vertex at a double chip);
* ``bridge_ray``: for a chip on a bridge, a line through the other chip
  whose horizontal or vertical ray crosses the bridge;
* ``middle_cycle``: the vertex where the slope-1 line (in the frame of the
  interior point owning the cycle) through the midpoint of the edge dual to
  that point and the far boundary point meets the cycle again;
* ``search``: lines through pairs of curve vertices, edge midpoints and
  chip positions.

Every returned line is re-verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .divisor import Divisor, canonical_divisor, class_key
from .lattice import LatticePoint, interior_points
from .metricgraph import ModelMap
from .theta import ThetaCategory, ThetaCharacteristic, all_theta_characteristics
from .tropcurve import (LINE_RAYS, DegenerateInput, LineFamily, Skeleton, TropicalCurve,
                        intersection_components, line_point, push_to_metric, skeleton,
                        stable_intersection, tropical_line, tropical_lines_through)


class TheoremViolation(AssertionError):
    """A check that should hold by a theorem failed."""


@dataclass
class Tangency:
    profile: tuple            # (2, 2) or (4,)
    components: list          # tropcurve.Component
    half_points: list         # (plane point, multiplicity) with total 2
    divisor: Divisor          # on the refined skeleton
    thetas: tuple = ()        # indices of theta characteristics realized on L ∩ C
    theta: int | None = None  # the one reported
    choices: dict | None = None  # theta index -> (P, Q) plane points

    def select(self, idx: int, sk: Skeleton) -> "Tangency":
        """The same line read as tangent along theta characteristic ``idx``."""
        if idx == self.theta:
            return self
        p, q = self.choices[idx]
        half = [(p, 2)] if p == q else [(p, 1), (q, 1)]
        return Tangency(self.profile, self.components, half, push_to_metric(sk, half),
                        self.thetas, idx, self.choices)


@dataclass
class BitangentLine:
    vertex: tuple
    tangency: Tangency
    theta: int | None = None
    method: str = ""
    family: LineFamily | None = None

    @property
    def profile(self) -> tuple:
        return self.tangency.profile

    def to_json(self) -> dict:
        out = {
            "vertex": [_fr(self.vertex[0]), _fr(self.vertex[1])],
            "profile": list(self.profile),
            "tangency_points": [{"point": [_fr(p[0]), _fr(p[1])], "multiplicity": m}
                                for p, m in self.tangency.half_points],
            "tangency_divisor": self.tangency.divisor.to_json(),
            "theta": self.theta,
            "method": self.method,
        }
        if self.family is not None:
            f = self.family
            out["family"] = {"start": [_fr(f.start[0]), _fr(f.start[1])],
                             "direction": list(f.direction),
                             "length": None if f.length is None else _fr(f.length)}
        return out


@dataclass
class BitangentClass:
    representative: BitangentLine
    theta: ThetaCharacteristic

    @property
    def is_family(self) -> bool:
        return self.representative.family is not None

    def to_json(self) -> dict:
        out = self.representative.to_json()
        out["infinite"] = self.is_family
        out["category"] = self.theta.category.value if self.theta.category else None
        return out


def _fr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# detection


def _path_midpoint(a, b) -> tuple:
    """Midpoint of the path on the line between positions ``(ray, s)``."""
    (r1, s1), (r2, s2) = a, b
    if r1 == r2:
        return r1, (s1 + s2) / 2
    half = (s1 + s2) / 2
    return (r1, s1 - half) if s1 >= half else (r2, s2 - half)


def _pos(ray, s) -> tuple:
    return (0, Fraction(0)) if s == 0 else (ray, Fraction(s))


def _halve(comp) -> list:
    """Default halving: half of each even point, odd points paired by path midpoints."""
    half: dict = {}
    odd = []
    for ray, s, _, m in sorted(comp.stable, key=lambda x: (x[0], x[1])):
        pos = _pos(ray, s)
        if m // 2:
            half[pos] = half.get(pos, 0) + m // 2
        if m % 2:
            odd.append(pos)
    if len(odd) % 2:
        raise TheoremViolation("component with odd stable multiplicity")
    for a, b in zip(odd[::2], odd[1::2]):
        pos = _pos(*_path_midpoint(a, b))
        half[pos] = half.get(pos, 0) + 1
    out = []
    for pos, m in sorted(half.items()):
        out += [pos] * m
    return out


def _candidates(comp) -> list:
    """Positions of the component that may carry a tangency point."""
    stable = sorted({_pos(r, s) for r, s, _, _ in comp.stable})
    out = list(_halve(comp))
    out += stable
    for a, b in combinations(stable, 2):
        out.append(_pos(*_path_midpoint(a, b)))
    for pc in comp.pieces:
        out.append(_pos(pc.ray, pc.lo))
        if pc.hi is not None:
            out += [_pos(pc.ray, pc.hi), _pos(pc.ray, (pc.lo + pc.hi) / 2)]
    seen, uniq = set(), []
    for x in out:
        if x not in seen:
            seen.add(x)
            uniq.append(x)
    return uniq


class TangencyResolver:
    """Matches tangency points of a line against the theta characteristics of a curve."""

    def __init__(self, c: TropicalCurve, sk: Skeleton | None = None, thetas=None):
        self.c = c
        self.sk = sk or skeleton(c)
        self.mm = ModelMap(self.sk.graph)
        self.thetas = thetas if thetas is not None else all_theta_characteristics(self.sk.graph)
        self.keys = {class_key(t.divisor): t.index for t in self.thetas}
        self._points: dict = {}
        self._pairs: dict = {}

    def skeleton_point(self, pt):
        if pt not in self._points:
            self._points[pt] = self.sk.retract(self.c.locate(pt))
        return self._points[pt]

    def theta_of(self, a, b) -> int | None:
        """Theta index of the class of ``a + b`` (plane points), if effective theta."""
        pa, pb = self.skeleton_point(a), self.skeleton_point(b)
        key = tuple(sorted((pa, pb)))
        if key not in self._pairs:
            m = self.mm.minimal
            d = Divisor(m, [self.mm.to_minimal(pa), self.mm.to_minimal(pb)])
            self._pairs[key] = self.keys.get(class_key(d))
        return self._pairs[key]

    def minimal(self, d: Divisor) -> Divisor:
        return Divisor(self.mm.minimal, {self.mm.to_minimal(p): k for p, k in d.chips.items()})


def is_bitangent(vertex, c: TropicalCurve, sk: Skeleton | None = None,
                 resolver: TangencyResolver | None = None) -> Tangency | None:
    """Tangency structure of the line with this vertex, or None.

    The tangency divisor is P + Q with P, Q in the components of L ∩ C (one
    in each for the (2, 2) profile) whose class is an effective theta
    characteristic. Candidates are tried with the plain halving of the
    stable intersection first.
    """
    v = (Fraction(vertex[0]), Fraction(vertex[1]))
    comps = intersection_components(v, c)
    mults = sorted((cm.multiplicity for cm in comps), reverse=True)
    if mults not in ([2, 2], [4]):
        return None
    resolver = resolver or TangencyResolver(c, sk)
    if len(comps) == 2:
        c1, c2 = _candidates(comps[0]), _candidates(comps[1])
        default = (_halve(comps[0])[0], _halve(comps[1])[0])
        pairs = [(a, b) for a in c1 for b in c2]
    else:
        c1 = _candidates(comps[0])
        default = tuple(_halve(comps[0]))
        pairs = [(a, b) for i, a in enumerate(c1) for b in c1[i:]]
    matches: dict = {}
    for a, b in [default] + pairs:
        pa, pb = line_point(v, *a), line_point(v, *b)
        j = resolver.theta_of(pa, pb)
        if j is not None and j not in matches:
            matches[j] = (pa, pb)
    chosen = resolver.theta_of(line_point(v, *default[0]), line_point(v, *default[1]))
    if chosen is None and matches:
        chosen = min(matches)
    if chosen is not None:
        pts = matches[chosen]
    else:
        pts = (line_point(v, *default[0]), line_point(v, *default[1]))
    half = [(pts[0], 2)] if pts[0] == pts[1] else [(pts[0], 1), (pts[1], 1)]
    return Tangency(tuple(mults), comps, half, push_to_metric(resolver.sk, half),
                    tuple(sorted(matches)), chosen, matches)


def line_section(vertex, c: TropicalCurve, sk: Skeleton) -> Divisor:
    """Stable intersection with the line, retracted to the skeleton."""
    return push_to_metric(sk, stable_intersection(tropical_line(vertex), c))


# --------------------------------------------------------------------------
# constructions


class _Context:
    """Per-curve caches shared by the constructions."""

    def __init__(self, c: TropicalCurve, sk: Skeleton, thetas=None):
        self.c = c
        self.sk = sk
        self.resolver = TangencyResolver(c, sk, thetas)
        self.mm = self.resolver.mm
        self.thetas = self.resolver.thetas
        self.kK = class_key(canonical_divisor(self.mm.minimal))
        self._seen: dict = {}
        self._search_done = False
        self.found: dict = {}   # theta index -> (vertex, tangency) from the search

    def minimal_key(self, d: Divisor) -> tuple:
        return class_key(self.resolver.minimal(d))

    def check(self, vertex):
        """``(tangency, theta index or None)`` for the line with this vertex."""
        vertex = (Fraction(vertex[0]), Fraction(vertex[1]))
        if vertex not in self._seen:
            tg = is_bitangent(vertex, self.c, self.sk, self.resolver)
            self._seen[vertex] = (tg, tg.theta if tg is not None else None)
        return self._seen[vertex]

    def plane(self, p) -> tuple:
        return self.sk.embed(p)


def _line_candidates(p, q) -> list:
    """Vertices of lines through ``p`` and ``q`` (family: endpoints and a midpoint)."""
    if p == q:
        return [p]
    try:
        res = tropical_lines_through(p, q)
    except DegenerateInput:
        return [p]
    if isinstance(res, LineFamily):
        return res.sample()
    return [res.vertices[0]]


def _through_chips(ctx: _Context, theta: ThetaCharacteristic) -> list:
    pts = [ctx.plane(p) for p, k in sorted(theta.refined.chips.items()) for _ in range(k)]
    return _line_candidates(pts[0], pts[-1])


def _bridge_ray(ctx: _Context, theta: ThetaCharacteristic) -> list:
    g = ctx.mm.minimal
    bridges = set(g.bridges())
    out = []
    chips = theta.points
    for i, p in enumerate(chips):
        edges = [p.edge] if not p.is_vertex else [e for e, _ in g.incident[p.pos]]
        for b in edges:
            if b not in bridges:
                continue
            other = ctx.plane(ctx.mm.to_refined(chips[1 - i]))
            for e, _ in ctx.mm.chains[b]:
                cell = ctx.c.cells[e]
                a, z = ctx.c.vertices[cell.tail], ctx.c.vertices[cell.head]
                # points of the bridge level with, or straight left/below of, the other chip
                for k in (0, 1):
                    lo, hi = sorted((a[k], z[k]))
                    if lo <= other[k] <= hi and a[k] != z[k]:
                        t = (other[k] - a[k]) / (z[k] - a[k])
                        r = (a[0] + t * (z[0] - a[0]), a[1] + t * (z[1] - a[1]))
                        out += _line_candidates(other, r)
                mid = ((a[0] + z[0]) / 2, (a[1] + z[1]) / 2)
                out += _line_candidates(other, mid)
    return out


def _bary(p, d):
    return (p[0], p[1], d - p[0] - p[1])


def _from_bary(b):
    return LatticePoint(b[0], b[1])


def _middle_cycle(ctx: _Context, theta: ThetaCharacteristic) -> list:
    c = ctx.c
    d = c.degree
    out = []
    for p in interior_points(d):
        b = _bary(p, d)
        k = b.index(2)
        far = _from_bary(tuple(0 if i == k else 2 for i in range(3)))
        e1 = tuple(sorted((p, far)))
        cell = next((x for x in c.bounded_edges if tuple(sorted(x.dual)) == e1), None)
        if cell is None:
            continue
        u = ((1, 0), (0, 1), (1, 1))[k]
        a, z = c.vertices[cell.tail], c.vertices[cell.head]
        m = ((a[0] + z[0]) / 2, (a[1] + z[1]) / 2)
        for x in c.bounded_edges:
            if p not in x.dual or x.id == cell.id:
                continue
            out += _euclid_hits(m, u, c.vertices[x.tail], c.vertices[x.head])
    return out


def _euclid_hits(m, u, a, z) -> list:
    """Points of segment ``[a, z]`` on the Euclidean line ``m + s u``."""
    w = (z[0] - a[0], z[1] - a[1])
    X = u[0] * w[1] - u[1] * w[0]
    r = (a[0] - m[0], a[1] - m[1])
    if X == 0:
        if r[0] * u[1] - r[1] * u[0] == 0:
            return [a, z]
        return []
    t = (r[0] * u[1] - r[1] * u[0]) / X
    if 0 <= t <= 1:
        return [(a[0] + t * w[0], a[1] + t * w[1])]
    return []


def _special_points(ctx: _Context) -> list:
    c = ctx.c
    pts = set(c.vertices)
    for x in c.bounded_edges:
        a, z = c.vertices[x.tail], c.vertices[x.head]
        pts.add(((a[0] + z[0]) / 2, (a[1] + z[1]) / 2))
    for th in ctx.thetas:
        for p in th.refined.chips:
            pts.add(ctx.plane(p))
    return sorted(pts)


def _search(ctx: _Context) -> None:
    """Fill ``ctx.found`` from lines through pairs of special points."""
    if ctx._search_done:
        return
    ctx._search_done = True
    pts = _special_points(ctx)
    for p, q in combinations(pts, 2):
        for v in _line_candidates(p, q):
            tg, _ = ctx.check(v)
            for idx in tg.thetas if tg is not None else ():
                ctx.found.setdefault(idx, (v, tg))
        if len(ctx.found) == len(ctx.thetas):
            return


_STRATEGIES = (("through_chips", _through_chips), ("bridge_ray", _bridge_ray),
               ("middle_cycle", _middle_cycle))


def _family_of(ctx: _Context, vertex, idx) -> LineFamily | None:
    """Translations of the vertex that keep bitangency in the same class.

    Probes the ray directions and curve edge directions. Between consecutive
    breakpoints (where the moving line meets a curve vertex or the moving
    vertex meets a cell) the intersection pattern is constant, so checking
    each breakpoint and each gap midpoint decides the extent.
    """
    c = ctx.c
    dirs = set()
    for r in LINE_RAYS:
        dirs |= {r, (-r[0], -r[1])}
    for x in c.cells:
        dirs |= {x.direction, (-x.direction[0], -x.direction[1])}

    def ok(u, s):
        tg, _ = ctx.check((vertex[0] + s * u[0], vertex[1] + s * u[1]))
        return tg is not None and idx in tg.thetas

    def extent(u):
        steps = _breakpoints(c, vertex, u)
        reach = Fraction(0)
        for i, s in enumerate(steps):
            lo = steps[i - 1] if i else Fraction(0)
            if not ok(u, (lo + s) / 2):
                return reach
            if not ok(u, s):
                return (lo + s) / 2 if reach == lo else reach
            reach = s
        return None if ok(u, reach + 1) else reach

    for u in sorted(dirs):
        fwd = extent(u)
        if fwd == 0:
            continue
        back = extent((-u[0], -u[1]))
        if back is None:
            if fwd is None:
                return LineFamily(vertex, u, None)
            end = (vertex[0] + fwd * u[0], vertex[1] + fwd * u[1])
            return LineFamily(end, (-u[0], -u[1]), None)
        start = (vertex[0] - back * u[0], vertex[1] - back * u[1])
        return LineFamily(start, u, None if fwd is None else back + fwd)
    return None


def _breakpoints(c: TropicalCurve, v, u) -> list:
    """Positive parameters where ``v + s u`` meets a curve vertex's line or a cell."""
    out = set()
    for w in c.vertices:
        for r in LINE_RAYS:
            X = u[0] * r[1] - u[1] * r[0]
            if X:
                s = ((w[0] - v[0]) * r[1] - (w[1] - v[1]) * r[0]) / X
                if s > 0:
                    out.add(s)
    k = 0 if u[0] else 1
    for x in c.cells:
        a = c.vertices[x.tail]
        z = c.vertices[x.head] if x.head is not None else (a[0] + 10**6 * x.direction[0],
                                                            a[1] + 10**6 * x.direction[1])
        for h in _euclid_hits(v, u, a, z):
            s = (h[k] - v[k]) / u[k]
            if s > 0:
                out.add(s)
    return sorted(out)


def bitangent_from_theta(c: TropicalCurve, theta: ThetaCharacteristic,
                         ctx: _Context | None = None, families: bool = True) -> BitangentLine:
    ctx = ctx or _Context(c, skeleton(c))
    idx = theta.index
    strategies = list(_STRATEGIES)
    if theta.category == ThetaCategory.FLEXIBLE:
        strategies.insert(0, strategies.pop(1))
    elif theta.category == ThetaCategory.TANDEM:
        strategies.insert(0, strategies.pop(2))
    for name, fn in strategies:
        for v in fn(ctx, theta):
            tg, _ = ctx.check(v)
            if tg is not None and idx in tg.thetas:
                return _finish(ctx, v, tg, idx, name, families)
    _search(ctx)
    if idx in ctx.found:
        v, tg = ctx.found[idx]
        return _finish(ctx, v, tg, idx, "search", families)
    raise TheoremViolation(f"no bitangent found for theta characteristic {idx}")


def _finish(ctx, v, tg, idx, method, families) -> BitangentLine:
    fam = _family_of(ctx, v, idx) if families else None
    if fam is not None:
        v = fam.canonical_vertex()
        tg = ctx.check(v)[0]
    tg = tg.select(idx, ctx.sk)
    if ctx.minimal_key(2 * tg.divisor) != ctx.kK:
        raise TheoremViolation("twice the tangency divisor is not canonical")
    return BitangentLine(v, tg, idx, method, fam)


def bitangent_classes(c: TropicalCurve, thetas=None, families: bool = True) -> list[BitangentClass]:
    """One bitangent class per effective theta characteristic (exactly 7)."""
    sk = skeleton(c)
    ctx = _Context(c, sk, thetas)
    out = []
    for th in ctx.thetas:
        out.append(BitangentClass(bitangent_from_theta(c, th, ctx, families), th))
    keys = {ctx.minimal_key(b.representative.tangency.divisor) for b in out}
    if len(out) != 7 or len(keys) != 7:
        raise TheoremViolation(f"{len(keys)} bitangent classes instead of 7")
    return out


def equivalent_bitangents(b1: BitangentLine, b2: BitangentLine) -> bool:
    d1, d2 = b1.tangency.divisor, b2.tangency.divisor
    if d1.graph is not d2.graph:
        raise ValueError("bitangents of different curves")
    return class_key(d1) == class_key(d2)


def bitangent_report(classes: list) -> dict:
    return {"schema": "tropquartic.bitangents/1",
            "classes": [b.to_json() for b in classes],
            "infinite_families": sum(b.is_family for b in classes)}


__all__ = ["BitangentClass", "BitangentLine", "Tangency", "TheoremViolation",
           "bitangent_classes", "bitangent_from_theta", "bitangent_report",
           "equivalent_bitangents", "is_bitangent", "line_section"]

"""Unimodular triangulations of the dilated standard triangle.

The degree-``d`` triangle has corners (0,0), (d,0), (0,d). Triangulations
are enumerated by closing an advancing front of edges, classified under the
S3 symmetry of the triangle, and lifted to exact integer heights by a small
rational LP.

Tropical convention used throughout the package: a height function ``h``
defines ``F(x) = min_p (h(p) - <p, x>)``; the subdivision dual to its corner
locus is the projection of the lower convex hull of the points
``(p, h(p))``. With this sign the curve rays point in the directions
(-1,0), (0,-1) and (1,1).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from .lp import maximize


class InvalidDegree(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


class NonRegularTriangulation(ValueError):
    """No height function induces the triangulation."""


class ParseError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


class LatticePoint(NamedTuple):
    x: int
    y: int


Edge = tuple  # sorted pair of LatticePoint

MAX_ENUM_DEGREE = 4


def _det(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_points(d: int) -> list[LatticePoint]:
    """Lattice points of the degree-``d`` triangle, sorted by (x, y)."""
    if not isinstance(d, int) or d < 1:
        raise InvalidDegree(f"degree must be a positive integer, got {d!r}")
    return [LatticePoint(x, y) for x in range(d + 1) for y in range(d + 1 - x)]


def interior_points(d: int) -> list[LatticePoint]:
    return [p for p in newton_points(d) if p.x > 0 and p.y > 0 and p.x + p.y < d]


def on_boundary(p, d: int) -> bool:
    return p[0] == 0 or p[1] == 0 or p[0] + p[1] == d


def boundary_side(a, b, d: int) -> int | None:
    """Which side of the big triangle the segment ``ab`` lies on.

    0: bottom (y=0), 1: left (x=0), 2: hypotenuse (x+y=d), None if interior.
    """
    if a[1] == 0 and b[1] == 0:
        return 0
    if a[0] == 0 and b[0] == 0:
        return 1
    if a[0] + a[1] == d and b[0] + b[1] == d:
        return 2
    return None


def canonical_triangle(a, b, c) -> tuple:
    """Counterclockwise vertex order starting from the smallest vertex."""
    pts = [LatticePoint(*a), LatticePoint(*b), LatticePoint(*c)]
    if _det(*pts) < 0:
        pts[1], pts[2] = pts[2], pts[1]
    i = min(range(3), key=lambda k: pts[k])
    return tuple(pts[i:] + pts[:i])


def twice_area(tri) -> int:
    return _det(*tri)


@dataclass(frozen=True)
class Triangulation:
    degree: int
    triangles: tuple  # sorted tuple of canonical CCW triangles

    @classmethod
    def from_triangles(cls, degree: int, triangles: Iterable) -> "Triangulation":
        return cls(degree, tuple(sorted(canonical_triangle(*t) for t in triangles)))

    @cached_property
    def edges(self) -> dict:
        """Map sorted edge -> list of triangle indices containing it."""
        out: dict = {}
        for i, t in enumerate(self.triangles):
            for k in range(3):
                e = tuple(sorted((t[k], t[(k + 1) % 3])))
                out.setdefault(e, []).append(i)
        return out

    @cached_property
    def interior_edges(self) -> list:
        return sorted(e for e, ts in self.edges.items() if len(ts) == 2)

    @cached_property
    def boundary_edges(self) -> list:
        return sorted(e for e, ts in self.edges.items() if len(ts) == 1)

    @property
    def vertices(self) -> set:
        return {p for t in self.triangles for p in t}

    def key(self) -> tuple:
        return self.triangles

    def neighbors(self, p) -> set:
        """Lattice points joined to ``p`` by an edge."""
        out = set()
        for a, b in self.edges:
            if a == p:
                out.add(b)
            elif b == p:
                out.add(a)
        return out

    def serialize(self) -> str:
        lines = [f"degree {self.degree}"]
        for t in self.triangles:
            lines.append(" ".join(f"{p.x},{p.y}" for p in t))
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# validity


def check_unimodular_triangulation(t: Triangulation) -> tuple[bool, str]:
    """Return ``(ok, diagnostic)``; never raises on bad tilings."""
    d = t.degree
    pts = set(newton_points(d))
    for tri in t.triangles:
        for p in tri:
            if tuple(p) not in pts:
                return False, f"vertex {tuple(p)} outside the degree-{d} triangle"
        if twice_area(tri) != 1:
            return False, f"triangle {tri} has area {Fraction(abs(twice_area(tri)), 2)}"
    if len(t.triangles) != d * d:
        return False, f"{len(t.triangles)} triangles, expected {d * d}"
    if len(set(t.triangles)) != len(t.triangles):
        return False, "duplicate triangle"
    for e, ts in t.edges.items():
        side = boundary_side(e[0], e[1], d)
        want = 1 if side is not None else 2
        if len(ts) != want:
            return False, f"edge {e} borders {len(ts)} triangles, expected {want}"
        if want == 2:
            # the two triangles must lie on opposite sides of the edge
            apex = [next(p for p in t.triangles[i] if p not in e) for i in ts]
            if _det(e[0], e[1], apex[0]) * _det(e[0], e[1], apex[1]) >= 0:
                return False, f"triangles overlap across edge {e}"
    return True, "ok"


def is_unimodular_triangulation(t: Triangulation) -> bool:
    return check_unimodular_triangulation(t)[0]


# --------------------------------------------------------------------------
# enumeration


def _interiors_disjoint(s, t) -> bool:
    # separating axis through an edge of either triangle
    for a, b in ((s, t), (t, s)):
        for k in range(3):
            p, q = a[k], a[(k + 1) % 3]
            # a is CCW, so its interior is on the left of pq
            if all(_det(p, q, r) <= 0 for r in b):
                return True
    return False


class _Catalog:
    """All unimodular triangles of the degree-d triangle plus compatibility masks."""

    def __init__(self, d: int):
        self.d = d
        pts = newton_points(d)
        self.triangles = sorted({canonical_triangle(*c) for c in itertools.combinations(pts, 3)
                                 if abs(_det(*c)) == 1})
        n = len(self.triangles)
        self.compat = [0] * n
        for i in range(n):
            for j in range(n):
                if i == j or _interiors_disjoint(self.triangles[i], self.triangles[j]):
                    self.compat[i] |= 1 << j
        # edge -> list of (triangle index, orientation sign of apex)
        self.by_edge: dict = {}
        for i, tri in enumerate(self.triangles):
            for k in range(3):
                e = tuple(sorted((tri[k], tri[(k + 1) % 3])))
                apex = tri[(k + 2) % 3]
                sgn = 1 if _det(e[0], e[1], apex) > 0 else -1
                self.by_edge.setdefault(e, []).append((i, sgn))


_CATALOGS: dict = {}


def _catalog(d: int) -> _Catalog:
    if d not in _CATALOGS:
        _CATALOGS[d] = _Catalog(d)
    return _CATALOGS[d]


def _first_edge(d: int):
    return (LatticePoint(0, 0), LatticePoint(1, 0))


def enumeration_branches(d: int) -> list[int]:
    """Catalog indices of the possible triangles on the first boundary edge.

    Each one seeds an independent subtree, which is how census runs split work.
    """
    cat = _catalog(d)
    e0 = _first_edge(d)
    return [i for i, s in cat.by_edge[e0] if s > 0]


def _search(cat: _Catalog, d: int, first: int) -> Iterator[Triangulation]:
    tris = cat.triangles
    full = d * d

    def tri_edges(i):
        t = tris[i]
        for k in range(3):
            e = tuple(sorted((t[k], t[(k + 1) % 3])))
            apex = t[(k + 2) % 3]
            yield e, (1 if _det(e[0], e[1], apex) > 0 else -1)

    def add(front: dict, i: int) -> dict:
        front = dict(front)
        for e, s in tri_edges(i):
            if e in front:
                del front[e]
            elif boundary_side(e[0], e[1], d) is None:
                front[e] = -s  # the missing neighbour must sit on the other side
        return front

    out = []

    def rec(mask, front, count):
        if not front:
            if count == full:
                out.append(Triangulation.from_triangles(d, (tris[i] for i in _bits(mask))))
            return
        e = min(front)
        side = front[e]
        for i, s in cat.by_edge[e]:
            if s != side:
                continue
            if cat.compat[i] & mask != mask:
                continue
            rec(mask | (1 << i), add(front, i), count + 1)

    rec(1 << first, add({}, first), 1)
    yield from out


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def enumerate_unimodular_triangulations(d: int, max_degree: int = MAX_ENUM_DEGREE,
                                        branches: Iterable[int] | None = None) -> list[Triangulation]:
    """All unimodular triangulations of the degree-``d`` triangle, canonically sorted."""
    newton_points(d)  # validates d
    if d > max_degree:
        raise ResourceLimit(f"degree {d} exceeds the enumeration limit {max_degree}")
    cat = _catalog(d)
    if branches is None:
        branches = enumeration_branches(d)
    out = []
    for b in branches:
        out.extend(_search(cat, d, b))
    out.sort(key=Triangulation.key)
    return out


def flip_graph_triangulations(d: int) -> list[Triangulation]:
    """Independent enumeration: breadth-first search over diagonal flips.

    Triangulations of a planar point set using every point are connected
    under flips, so starting from the standard triangulation reaches all
    unimodular ones.
    """
    start = standard_triangulation(d)
    seen = {start.key(): start}
    queue = [start]
    while queue:
        t = queue.pop()
        for u in flips(t):
            if u.key() not in seen:
                seen[u.key()] = u
                queue.append(u)
    return sorted(seen.values(), key=Triangulation.key)


def flips(t: Triangulation) -> Iterator[Triangulation]:
    for e in t.interior_edges:
        i, j = t.edges[e]
        c = next(p for p in t.triangles[i] if p not in e)
        f = next(p for p in t.triangles[j] if p not in e)
        a, b = e
        # convex quadrilateral: c and f strictly on opposite sides of line ab,
        # a and b strictly on opposite sides of line cf
        if _det(c, f, a) * _det(c, f, b) < 0:
            new = [x for k, x in enumerate(t.triangles) if k not in (i, j)]
            new += [canonical_triangle(a, c, f), canonical_triangle(b, c, f)]
            yield Triangulation.from_triangles(t.degree, new)


def standard_triangulation(d: int) -> Triangulation:
    tris = []
    for x in range(d):
        for y in range(d - x):
            tris.append(((x, y), (x + 1, y), (x, y + 1)))
            if x + y + 2 <= d:
                tris.append(((x + 1, y), (x + 1, y + 1), (x, y + 1)))
    return Triangulation.from_triangles(d, tris)


# --------------------------------------------------------------------------
# symmetry


PERMUTATIONS = tuple(itertools.permutations(range(3)))


@dataclass(frozen=True)
class SymmetryElement:
    """Affine lattice automorphism of the triangle permuting barycentric coordinates."""

    perm: tuple
    degree: int

    def __call__(self, p) -> LatticePoint:
        c = (p[0], p[1], self.degree - p[0] - p[1])
        return LatticePoint(c[self.perm[0]], c[self.perm[1]])

    def linear_part(self) -> tuple:
        """Matrix ``A`` (row-major 2x2) with ``self(p) = A p + b``."""
        o = self((0, 0))
        ex = self((1, 0))
        ey = self((0, 1))
        return ((ex[0] - o[0], ey[0] - o[0]), (ex[1] - o[1], ey[1] - o[1]))

    def inverse(self) -> "SymmetryElement":
        inv = [0, 0, 0]
        for i, j in enumerate(self.perm):
            inv[j] = i
        return SymmetryElement(tuple(inv), self.degree)

    def apply(self, t: Triangulation) -> Triangulation:
        return Triangulation.from_triangles(t.degree, ([self(p) for p in tri] for tri in t.triangles))


def symmetries(d: int) -> list[SymmetryElement]:
    return [SymmetryElement(p, d) for p in PERMUTATIONS]


def canonical_form(t: Triangulation) -> Triangulation:
    return min((g.apply(t) for g in symmetries(t.degree)), key=Triangulation.key)


@dataclass
class Orbit:
    representative: Triangulation
    members: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)


def s3_orbits(ts: list[Triangulation]) -> list[Orbit]:
    """Partition into S3 orbits, ordered by canonical representative."""
    orbits: dict = {}
    for t in ts:
        rep = canonical_form(t)
        orbits.setdefault(rep.key(), Orbit(rep)).members.append(t)
    return [orbits[k] for k in sorted(orbits)]


# --------------------------------------------------------------------------
# heights and regular subdivisions


HeightFunction = dict  # LatticePoint -> Fraction (or int)


def fold_coefficients(t: Triangulation, e) -> dict:
    """Linear form in the heights measuring the convexity fold across interior edge ``e``.

    Positive iff the lifted triangles meet in a strictly convex crease.
    """
    i, j = t.edges[e]
    a, b = e
    c = next(p for p in t.triangles[i] if p not in e)
    f = next(p for p in t.triangles[j] if p not in e)
    # f = a + alpha (b - a) + beta (c - a)
    den = _det(a, b, c)
    beta = Fraction(_det(a, b, f), den)
    alpha = Fraction(_det(a, f, c), den)
    coef: dict = {}
    for p, v in ((f, 1), (a, -(1 - alpha - beta)), (b, -alpha), (c, -beta)):
        coef[p] = coef.get(p, 0) + v
    return coef


def folds(t: Triangulation, h: HeightFunction) -> dict:
    return {e: sum(v * h[p] for p, v in fold_coefficients(t, e).items()) for e in t.interior_edges}


def regular_heights(t: Triangulation) -> dict:
    """Integer heights inducing ``t``; deterministic.

    Solves ``max s`` subject to every interior-edge fold being at least ``s``,
    ``s <= 1``, corners pinned at height 0, by exact simplex with Bland's
    rule, then scales so every fold is at least 1 and clears denominators.
    """
    d = t.degree
    pts = newton_points(d)
    corners = {(0, 0), (d, 0), (0, d)}
    free = [p for p in pts if p not in corners]
    idx = {p: k for k, p in enumerate(free)}
    n = len(free)
    # variables u_p = -h_p >= 0 (convex lift pinned at the corners), then s
    A, b = [], []
    for e in t.interior_edges:
        row = [Fraction(0)] * (n + 1)
        for p, v in fold_coefficients(t, e).items():
            if p in idx:
                row[idx[p]] += v  # fold(h) = -fold(u); want -fold(u) >= s
        row[n] = 1
        A.append(row)
        b.append(0)
    A.append([0] * n + [1])
    b.append(1)
    res = maximize([0] * n + [1], A, b)
    if res.status != "optimal" or not res.value or res.value <= 0:
        raise NonRegularTriangulation(f"no strictly convex lift for {t.triangles}")
    s = res.value
    h = {p: Fraction(0) for p in pts}
    for p, k in idx.items():
        h[p] = -res.x[k] / s
    return _integral(h)


def _integral(h: dict) -> dict:
    den = 1
    for v in h.values():
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    return {LatticePoint(*p): int(Fraction(v) * den) for p, v in sorted(h.items())}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def generic_heights(t: Triangulation, seed: int = 0, spread: int = 1000) -> dict:
    """LP heights scaled up plus a small seeded integer perturbation.

    The perturbation is bounded so every fold stays positive, hence the
    induced triangulation is unchanged while accidental equalities between
    edge lengths become unlikely.
    """
    h0 = regular_heights(t)
    rng = random.Random(f"{seed}:{t.serialize()}")
    worst = max((sum(abs(v) for v in fold_coefficients(t, e).values()) for e in t.interior_edges),
                default=Fraction(1))
    margin = min(folds(t, h0).values(), default=1)
    # K * margin > spread * worst keeps every fold positive
    K = int(spread * worst / margin) + 1
    return {p: K * v + rng.randrange(spread) for p, v in h0.items()}


@dataclass(frozen=True)
class Subdivision:
    degree: int
    cells: tuple  # sorted tuple of sorted point tuples
    unimodular: bool

    def as_triangulation(self) -> Triangulation | None:
        if not self.unimodular:
            return None
        return Triangulation.from_triangles(self.degree, self.cells)


def induced_subdivision(h: HeightFunction, d: int) -> Subdivision:
    """Project the lower convex hull of the lifted points ``(p, h(p))``."""
    pts = newton_points(d)
    H = {p: Fraction(h[p]) for p in pts}
    den = 1
    for v in H.values():
        den = den * v.denominator // _gcd(den, v.denominator)
    Z = {p: int(v * den) for p, v in H.items()}  # integer heights, same hull
    cells = set()
    for a, b, c in itertools.combinations(pts, 3):
        det = _det(a, b, c)
        if det == 0:
            continue
        sgn = 1 if det > 0 else -1
        ok = True
        on = []
        for p in pts:
            # det times (height of p minus the plane through the lifted a, b, c)
            diff = Z[p] * det - (_det(p, b, c) * Z[a] + _det(a, p, c) * Z[b] + _det(a, b, p) * Z[c])
            diff *= sgn
            if diff < 0:
                ok = False
                break
            if diff == 0:
                on.append(p)
        if ok:
            cells.add(tuple(sorted(on)))
    cells = sorted(cells)
    unimodular = (len(cells) == d * d and all(len(c) == 3 and abs(_det(*c)) == 1 for c in cells))
    return Subdivision(d, tuple(cells), unimodular)


# --------------------------------------------------------------------------
# file formats


def parse_triangulations(text: str) -> list[Triangulation]:
    """Parse one or more ``degree d`` blocks of ``x1,y1 x2,y2 x3,y3`` lines."""
    out = []
    degree = None
    tris: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("degree"):
            if degree is not None:
                out.append(Triangulation.from_triangles(degree, tris))
            parts = line.split()
            if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                raise ParseError(f"bad header {raw!r}", lineno)
            degree = int(parts[1])
            if degree < 1:
                raise ParseError(f"bad degree {degree}", lineno)
            tris = []
            continue
        if degree is None:
            raise ParseError("triangle before 'degree' header", lineno)
        try:
            pts = [tuple(int(v) for v in tok.split(",")) for tok in line.split()]
        except ValueError:
            raise ParseError(f"bad triangle {raw!r}", lineno) from None
        if len(pts) != 3 or any(len(p) != 2 for p in pts):
            raise ParseError(f"expected three x,y points, got {raw!r}", lineno)
        if _det(*pts) == 0:
            raise ParseError(f"degenerate triangle {raw!r}", lineno)
        tris.append(pts)
    if degree is None:
        raise ParseError("no 'degree' header found")
    out.append(Triangulation.from_triangles(degree, tris))
    return out


def parse_triangulation(text: str) -> Triangulation:
    ts = parse_triangulations(text)
    if len(ts) != 1:
        raise ParseError(f"expected one triangulation, found {len(ts)}")
    return ts[0]


def serialize_heights(h: HeightFunction) -> str:
    lines = []
    for p in sorted(h):
        v = Fraction(h[p])
        lines.append(f"{p[0]},{p[1]} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def parse_heights(text: str) -> dict:
    h = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            pt, val = line.split()
            x, y = (int(v) for v in pt.split(","))
            h[LatticePoint(x, y)] = Fraction(val)
        except ValueError:
            raise ParseError(f"bad height entry {raw!r}", lineno) from None
    if not h:
        raise ParseError("empty height file")
    d = max(p.x + p.y for p in h)
    missing = set(newton_points(d)) - set(h)
    if missing:
        raise ParseError(f"heights missing for {sorted(missing)}")
    return h

"""Independent integer chip-firing on finite multigraphs, used as an oracle.

By the Hladky-Kral-Norine theorem, the rank of a divisor on a loopless
graph equals its rank on the metric graph with unit edge lengths.
"""

from collections import deque
from itertools import combinations_with_replacement


class Multigraph:
    def __init__(self, n, edges):
        self.n = n
        self.edges = list(edges)
        self.adj = [[0] * n for _ in range(n)]
        for u, v in self.edges:
            if u != v:
                self.adj[u][v] += 1
                self.adj[v][u] += 1

    def degree(self, v):
        return sum(self.adj[v])


def subdivide_twice(n, edges):
    """Insert a midpoint on every edge; the result is loopless."""
    out, k = [], n
    for u, v in edges:
        out += [(u, k), (k, v)]
        k += 1
    return k, out


def _bfs(g, q):
    dist = [None] * g.n
    dist[q] = 0
    queue = deque([q])
    while queue:
        x = queue.popleft()
        for y in range(g.n):
            if g.adj[x][y] and dist[y] is None:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _fire(g, D, S):
    for v in S:
        for w in range(g.n):
            if w not in S and g.adj[v][w]:
                D[v] -= g.adj[v][w]
                D[w] += g.adj[v][w]


def reduce(g, D, q):
    D = list(D)
    dist = _bfs(g, q)
    for k in range(max(dist), 0, -1):
        inner = {v for v in range(g.n) if dist[v] < k}
        while any(D[v] < 0 for v in range(g.n) if dist[v] == k):
            _fire(g, D, inner)
    while True:
        burnt = {q}
        grew = True
        while grew:
            grew = False
            for v in range(g.n):
                if v not in burnt and sum(g.adj[v][w] for w in burnt) > D[v]:
                    burnt.add(v)
                    grew = True
        if len(burnt) == g.n:
            return D
        _fire(g, D, set(range(g.n)) - burnt)


def has_effective(g, D):
    return reduce(g, D, 0)[0] >= 0


def rank(g, D):
    deg = sum(D)
    if not has_effective(g, D):
        return -1
    r = 0
    while r < deg + 1:
        for E in combinations_with_replacement(range(g.n), r + 1):
            Dm = list(D)
            for v in E:
                Dm[v] -= 1
            if not has_effective(g, Dm):
                return r
        r += 1
    return r

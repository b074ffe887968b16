"""Small exact simplex solver over the rationals.

Dictionary-form tableau with Bland's anticycling rule. Intended for the
tiny dense systems that show up when lifting triangulations (a dozen
variables, a few dozen constraints), where exactness matters more than
speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class LPError(Exception):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None
    value: Fraction | None
    pivots: int = 0


class _Tableau:
    """Rows ``x_B[i] = b[i] - sum_j A[i][j] * x_N[j]``; objective ``z = z0 + sum_j c[j] x_N[j]``."""

    def __init__(self, A, b, c):
        self.m = len(A)
        self.n = len(c)
        self.A = [[Fraction(v) for v in row] for row in A]
        self.b = [Fraction(v) for v in b]
        self.c = [Fraction(v) for v in c]
        self.z0 = Fraction(0)
        self.nonbasic = list(range(self.n))
        self.basic = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        A, b, c = self.A, self.b, self.c
        row = A[r]
        piv = row[s]
        inv = 1 / piv
        # solve row r for the entering variable
        new_row = [v * inv for v in row]
        new_row[s] = inv
        br = b[r] * inv
        for i in range(self.m):
            if i == r:
                continue
            f = A[i][s]
            if f:
                Ai = A[i]
                for j in range(self.n):
                    if j != s:
                        nj = new_row[j]
                        if nj:
                            Ai[j] -= f * nj
                Ai[s] = -f * inv
                b[i] -= f * br
        f = c[s]
        if f:
            for j in range(self.n):
                if j != s and new_row[j]:
                    c[j] -= f * new_row[j]
            c[s] = -f * inv
            self.z0 += f * br
        A[r] = new_row
        b[r] = br
        self.basic[r], self.nonbasic[s] = self.nonbasic[s], self.basic[r]
        self.pivots += 1

    def optimize(self, max_pivots: int) -> str:
        while True:
            if self.pivots > max_pivots:
                raise LPError(f"pivot limit {max_pivots} exceeded")
            # Bland: smallest-index improving variable enters
            s = None
            best = None
            for j in range(self.n):
                if self.c[j] > 0 and (best is None or self.nonbasic[j] < best):
                    s, best = j, self.nonbasic[j]
            if s is None:
                return "optimal"
            r = None
            ratio = None
            for i in range(self.m):
                a = self.A[i][s]
                if a > 0:
                    q = self.b[i] / a
                    if (ratio is None or q < ratio
                            or (q == ratio and self.basic[i] < self.basic[r])):
                        r, ratio = i, q
            if r is None:
                return "unbounded"
            self.pivot(r, s)

    def solution(self, nvars: int) -> list[Fraction]:
        x = [Fraction(0)] * nvars
        for i, v in enumerate(self.basic):
            if v < nvars:
                x[v] = self.b[i]
        return x


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence,
             max_pivots: int = 100_000) -> LPResult:
    """Maximize ``c.x`` subject to ``A x <= b`` and ``x >= 0``, exactly.

    Negative right-hand sides trigger a phase-one solve with one auxiliary
    variable. All inputs are coerced to :class:`~fractions.Fraction`.
    """
    n = len(c)
    m = len(A)
    if any(len(row) != n for row in A) or len(b) != m:
        raise LPError("dimension mismatch")
    b = [Fraction(v) for v in b]
    if m and min(b) < 0:
        # phase one: maximize -x0 with x0 = index n
        A1 = [list(row) + [-1] for row in A]
        t = _Tableau(A1, b, [0] * n + [-1])
        # relabel so the auxiliary variable is n and slacks start at n + 1
        t.nonbasic = list(range(n + 1))
        t.basic = list(range(n + 1, n + 1 + m))
        r = min(range(m), key=lambda i: (b[i], i))
        t.pivot(r, n)
        t.optimize(max_pivots)
        if t.z0 < 0:
            return LPResult("infeasible", None, None, t.pivots)
        if n in t.basic:
            # degenerate: aux variable basic at zero, pivot it out
            r = t.basic.index(n)
            s = next((j for j in range(t.n) if t.A[r][j] != 0), None)
            if s is not None:
                t.pivot(r, s)
        s_aux = t.nonbasic.index(n)
        # drop the auxiliary column and rebuild the objective
        for row in t.A:
            del row[s_aux]
        del t.nonbasic[s_aux]
        t.n -= 1
        cfull = [Fraction(v) for v in c]
        t.c = [Fraction(0)] * t.n
        t.z0 = Fraction(0)
        for j, v in enumerate(t.nonbasic):
            if v < n:
                t.c[j] += cfull[v]
        for i, v in enumerate(t.basic):
            if v < n and cfull[v]:
                t.z0 += cfull[v] * t.b[i]
                for j in range(t.n):
                    t.c[j] -= cfull[v] * t.A[i][j]
        # keep variable indices consistent with the no-phase-one labelling
        t.nonbasic = [v if v < n else v - 1 for v in t.nonbasic]
        t.basic = [v if v < n else v - 1 for v in t.basic]
    else:
        t = _Tableau(A, b, c)
    status = t.optimize(max_pivots)
    if status == "unbounded":
        return LPResult("unbounded", None, None, t.pivots)
    return LPResult("optimal", t.solution(n), t.z0, t.pivots)

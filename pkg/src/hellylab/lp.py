"""Exact rational linear programming.

Two-phase tableau simplex over :class:`fractions.Fraction` with Bland's
rule, so it cannot cycle. Problems are taken in equality standard form::

    minimize  c.x   subject to  A x = b,  x >= 0

and the optimal basis also yields the dual vector ``y`` with ``A^T y <= c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from hellylab import limits
from hellylab.errors import InfeasibleError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] = field(default_factory=list)
    value: Fraction | None = None
    y: list[Fraction] = field(default_factory=list)
    pivots: int = 0


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [a * inv for a in row]
            self.rhs[r] *= inv
        b_r = self.rhs[r]
        nz = [(j, a) for j, a in enumerate(row) if a]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                for j, a in nz:
                    other[j] -= f * a
                self.rhs[i] -= f * b_r
        self.basis[r] = col
        self.pivots += 1

    def reduced_costs(self, cost: Sequence[Fraction], allowed: int) -> list[Fraction]:
        red = list(cost[:allowed])
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                row = self.rows[i]
                for j in range(allowed):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Minimize ``cost`` over columns ``< allowed`` (Bland's rule)."""
        while True:
            red = self.reduced_costs(cost, allowed)
            entering = next((j for j in range(allowed) if red[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def _solve_basis_duals(A, basis_cols, cost, rows_kept):
    """Solve B^T y = c_B for the rows that survived phase 1, exactly."""
    m = len(rows_kept)
    # rows of B^T are the basis columns
    M = [[Fraction(A[r][col]) for r in rows_kept] + [Fraction(cost[col])] for col in basis_cols]
    for c in range(m):
        p = next(i for i in range(c, m) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [a * inv for a in M[c]]
        for i in range(m):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [M[i][m] for i in range(m)]


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence, limit: int | None = None) -> LPResult:
    """Minimize c.x subject to A x = b, x >= 0, exactly."""
    m = len(A)
    n = len(c)
    limits.check("lp_variables", n, limit, what="LP variables")
    A = [[Fraction(a) for a in row] for row in A]
    b = [Fraction(v) for v in b]
    c = [Fraction(v) for v in c]
    sign = [1] * m
    for i in range(m):
        if b[i] < 0:
            sign[i] = -1
            A[i] = [-a for a in A[i]]
            b[i] = -b[i]

    # phase 1: one artificial per row
    rows = [A[i] + [Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    tab = _Tableau(rows, list(b), [n + i for i in range(m)])
    phase1_cost = [Fraction(0)] * n + [Fraction(1)] * m
    tab.run(phase1_cost, n + m)
    infeas = sum(tab.rhs[i] for i in range(m) if tab.basis[i] >= n)
    if infeas > 0:
        return LPResult(INFEASIBLE, pivots=tab.pivots)

    # drive remaining (zero-valued) artificials out; drop redundant rows
    keep = list(range(m))
    for i in range(m):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                keep.remove(i)
            else:
                tab.pivot(i, col)
    tab.rows = [tab.rows[i] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    original_rows = [i for i in keep]

    status = tab.run(c + [Fraction(0)] * m, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        x[bj] = tab.rhs[i]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))

    y = [Fraction(0)] * m
    if tab.basis:
        ys = _solve_basis_duals(A, tab.basis, c, original_rows)
        for r, v in zip(original_rows, ys):
            y[r] = v * sign[r]
    return LPResult(OPTIMAL, x, value, y, tab.pivots)


def feasible_point(A: Sequence[Sequence], b: Sequence, limit: int | None = None) -> list[Fraction] | None:
    """Some x >= 0 with A x = b, or None."""
    res = solve_standard(A, b, [0] * (len(A[0]) if A else 0), limit)
    if res.status == INFEASIBLE:
        return None
    return res.x


@dataclass
class CoveringLP:
    """Primal/dual pair for  min 1.x, Mx >= 1, x >= 0  and  max 1.y, M^T y <= 1, y >= 0."""

    value: Fraction
    primal: list[Fraction]
    dual: list[Fraction]
    dual_value: Fraction


def solve_covering(M: Sequence[Sequence[int]], limit: int | None = None) -> CoveringLP:
    """Fractional covering and packing optima of the 0/1 matrix ``M`` (rows = constraints).

    The two programs are solved separately; equality of the optima is checked,
    not assumed.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows == 0:
        return CoveringLP(Fraction(0), [Fraction(0)] * cols, [], Fraction(0))
    # covering: M x - s = 1
    A = [list(M[i]) + [-int(i == k) for k in range(rows)] for i in range(rows)]
    res = solve_standard(A, [1] * rows, [1] * cols + [0] * rows, limit)
    if res.status != OPTIMAL:
        raise InfeasibleError("covering LP has no feasible point (some row is all zero)")
    primal = res.x[:cols]
    # packing: M^T y + u = 1
    At = [[M[i][j] for i in range(rows)] + [int(j == k) for k in range(cols)] for j in range(cols)]
    pres = solve_standard(At, [1] * cols, [-1] * rows + [0] * cols, limit)
    if pres.status != OPTIMAL:
        raise InfeasibleError(f"packing LP ended {pres.status}")
    dual = pres.x[:rows]
    dual_value = sum(dual, Fraction(0))
    return CoveringLP(res.value, primal, dual, dual_value)


def check_covering_certificate(M: Sequence[Sequence[int]], sol: CoveringLP) -> None:
    """Verify primal and dual feasibility and equal objectives; AssertionError otherwise."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    assert all(v >= 0 for v in sol.primal) and all(v >= 0 for v in sol.dual)
    for i in range(rows):
        assert sum(M[i][j] * sol.primal[j] for j in range(cols)) >= 1, f"row {i} uncovered"
    for j in range(cols):
        assert sum(M[i][j] * sol.dual[i] for i in range(rows)) <= 1, f"column {j} overpacked"
    assert sum(sol.primal, Fraction(0)) == sol.value
    assert sol.value == sol.dual_value, "primal and dual optima differ"

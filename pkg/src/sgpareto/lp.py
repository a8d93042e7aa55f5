"""Small dense two-phase simplex over Fractions.

Bland's rule throughout, so no cycling; sizes here are tiny (a handful of
rows, tens of columns) and exactness matters more than speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[list[Fraction]] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(tab: list[list[Fraction]], row: int, col: int) -> None:
    prow = tab[row]
    piv = prow[col]
    if piv != 1:
        inv = 1 / piv
        tab[row] = prow = [v * inv for v in prow]
    for r, other in enumerate(tab):
        if r != row:
            f = other[col]
            if f:
                tab[r] = [a - f * b for a, b in zip(other, prow)]


def _simplex(tab, basis, ncols, allowed) -> bool:
    """Maximise the objective stored in the last row (as negated reduced
    costs). Returns False when unbounded."""
    obj = tab[-1]
    m = len(tab) - 1
    while True:
        col = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                col = j
                break
        if col < 0:
            return True
        best = None
        row = -1
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row < 0:
            return False
        _pivot(tab, row, col)
        basis[row] = col
        obj = tab[-1]


def linprog_max(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """maximise c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0."""
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for *_, ub in rows if ub)
    # columns: x (n) | slacks | artificials (m) | rhs
    ncols = n + n_slack + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    si = 0
    for i, (a, b, ub) in enumerate(rows):
        line = a + [ZERO] * (n_slack + m + 1)
        if ub:
            line[n + si] = ONE
            slack_col = n + si
            si += 1
        else:
            slack_col = None
        if b < 0:
            line = [-v for v in line]
            b = -b
        line[-1] = b
        if slack_col is not None and line[slack_col] == 1:
            basis.append(slack_col)
        else:
            line[n + n_slack + i] = ONE
            basis.append(n + n_slack + i)
        tab.append(line)

    artificial = [j >= n + n_slack for j in range(ncols)]
    uses_art = any(artificial[j] for j in basis)
    if uses_art:
        # phase 1: maximise -sum(artificials)
        obj = [ZERO] * (ncols + 1)
        for i, j in enumerate(basis):
            if artificial[j]:
                obj = [o - v for o, v in zip(obj, tab[i])]
        for j in range(ncols):
            if artificial[j]:
                obj[j] = ZERO
        tab.append(obj)
        _simplex(tab, basis, ncols, [True] * ncols)
        if tab[-1][-1] != 0:
            return LPResult(INFEASIBLE)
        tab.pop()
        # drive zero-level artificials out of the basis
        for i in range(len(basis) - 1, -1, -1):
            if artificial[basis[i]]:
                for j in range(n + n_slack):
                    if tab[i][j] != 0:
                        _pivot(tab, i, j)
                        basis[i] = j
                        break
                else:
                    del tab[i]
                    del basis[i]

    allowed = [not artificial[j] for j in range(ncols)]
    obj = [ZERO] * (ncols + 1)
    for j in range(n):
        obj[j] = -Fraction(c[j])
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [o - f * v for o, v in zip(obj, tab[i])]
    tab.append(obj)
    if not _simplex(tab, basis, ncols, allowed):
        return LPResult(UNBOUNDED)
    x = [ZERO] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tab[i][-1]
    return LPResult(OPTIMAL, tab[-1][-1], x)


def in_dominated_hull(point: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> bool:
    """Is ``point`` <= some convex combination of ``generators``?"""
    if not generators:
        return False
    n = len(point)
    m = len(generators)
    # -V^T lambda <= -point, sum lambda = 1
    A_ub = [[-g[i] for g in generators] for i in range(n)]
    b_ub = [-x for x in point]
    res = linprog_max([ZERO] * m, A_ub, b_ub, [[ONE] * m], [ONE])
    return res.feasible


def max_uniform_slack(point: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> Optional[Fraction]:
    """max t such that point + t*1 <= some convex combination of generators
    (None if even t = -1 fails, which cannot happen for points in [0,1]^n)."""
    n = len(point)
    m = len(generators)
    # variables: lambda (m), u = t + 1 >= 0
    A_ub = [[-g[i] for g in generators] + [ONE] for i in range(n)]
    b_ub = [ONE - x for x in point]
    res = linprog_max([ZERO] * m + [ONE], A_ub, b_ub, [[ONE] * m + [ZERO]], [ONE])
    if res.status != OPTIMAL:
        return None
    return res.value - 1

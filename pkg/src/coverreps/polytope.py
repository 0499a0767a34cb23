"""
Exact rational polytope helpers: a small simplex solver, convex hull vertices,
membership and strict supporting functionals.

Point sets here are tiny (one point per simple cycle), so an LP per query in
Fraction arithmetic is plenty.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Point = tuple[Fraction, ...]


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col]:
            f = tab[r][col]
            tab[r] = [a - f * b for a, b in zip(tab[r], tab[row])]
    basis[row] = col


def _simplex(tab: list[list[Fraction]], basis: list[int], allowed: int) -> str:
    """Maximize the objective stored (negated) in the last row; Bland's rule."""
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for r in range(m):
            a = tab[r][col]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], col)


def linprog(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
            a_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximize ``c.x`` subject to ``a_ub x <= b_ub``, ``a_eq x = b_eq``, ``x >= 0``.

    Two-phase tableau simplex over the rationals.

    >>> linprog([1, 1], [[1, 2], [3, 1]], [4, 6]).value
    Fraction(14, 5)
    """
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for row, b in zip(a_ub, b_ub):
        rows.append(([Fraction(x) for x in row], Fraction(b), True))
    for row, b in zip(a_eq, b_eq):
        rows.append(([Fraction(x) for x in row], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for r in rows if r[2])
    width = n + n_slack + m  # variables, slacks, artificials
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (row, b, ineq) in enumerate(rows):
        line = row + [Fraction(0)] * (n_slack + m) + [b]
        if ineq:
            line[n + s] = Fraction(1)
            s += 1
        if b < 0:
            line = [-v for v in line]
        line[n + n_slack + i] = Fraction(1)
        tab.append(line)
        basis.append(n + n_slack + i)
    # phase one: maximize -(sum of artificials)
    obj = [Fraction(0)] * (width + 1)
    for line in tab:
        obj = [o - v for o, v in zip(obj, line)]
    for i in range(m):
        obj[n + n_slack + i] = Fraction(0)
    tab.append(obj)
    _simplex(tab, basis, n + n_slack)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis
    for r in range(m):
        if basis[r] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if tab[r][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, r, col)
    obj = [Fraction(0)] * (width + 1)
    for j, cj in enumerate(c):
        obj[j] = -Fraction(cj)
    for r in range(m):
        if obj[basis[r]]:
            f = obj[basis[r]]
            obj = [o - f * v for o, v in zip(obj, tab[r])]
    tab[-1] = obj
    status = _simplex(tab, basis, n + n_slack)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for r, b in enumerate(basis):
        if b < n:
            x[b] = tab[r][-1]
    return LPResult("optimal", x, sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0)))


def as_point(v: Sequence) -> Point:
    return tuple(Fraction(x) for x in v)


def in_hull(q: Sequence, points: Sequence[Sequence]) -> bool:
    """Exact membership of ``q`` in the convex hull of ``points``."""
    if not points:
        return False
    pts = [as_point(p) for p in points]
    q = as_point(q)
    dim = len(q)
    a_eq = [[p[i] for p in pts] for i in range(dim)] + [[Fraction(1)] * len(pts)]
    b_eq = list(q) + [Fraction(1)]
    return linprog([0] * len(pts), a_eq=a_eq, b_eq=b_eq).status == "optimal"


def hull_vertices(points: Sequence[Sequence]) -> list[Point]:
    """Extreme points of the convex hull, deduplicated and sorted."""
    pts = sorted(set(as_point(p) for p in points))
    out = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        if not others or not in_hull(p, others):
            out.append(p)
    return out


def supporting_functional(v: Sequence, vertices: Sequence[Sequence]) -> tuple[Fraction, ...] | None:
    """A functional ``l`` with ``l(v) > l(w)`` for every other vertex ``w``.

    Found by maximizing the margin ``s`` subject to ``l(v - w) >= s`` and
    ``|l_i| <= 1``; ``None`` when ``v`` is not a vertex.
    """
    v = as_point(v)
    others = [as_point(w) for w in vertices if as_point(w) != v]
    dim = len(v)
    if not others:
        return tuple(Fraction(0) for _ in range(dim))
    # variables: l_plus (dim), l_minus (dim), s
    a_ub, b_ub = [], []
    for w in others:
        d = [vi - wi for vi, wi in zip(v, w)]
        a_ub.append([-x for x in d] + d + [Fraction(1)])
        b_ub.append(Fraction(0))
    for i in range(2 * dim + 1):
        row = [Fraction(0)] * (2 * dim + 1)
        row[i] = Fraction(1)
        a_ub.append(row)
        b_ub.append(Fraction(1))
    res = linprog([0] * (2 * dim) + [1], a_ub, b_ub)
    if res.status != "optimal" or res.value <= 0:
        return None
    x = res.x
    return tuple(x[i] - x[dim + i] for i in range(dim))


def dimension(points: Sequence[Sequence]) -> int:
    """Affine dimension of a point set (-1 when empty)."""
    pts = [as_point(p) for p in points]
    if not pts:
        return -1
    rows = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    rank = 0
    cols = len(pts[0])
    for c in range(cols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank

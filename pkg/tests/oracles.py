"""
Independent reference computations used to check the package.

Nothing here calls the routine it is meant to check; where a package object
is used it is only as a container for input data.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

import sympy

from coverreps.free_group import FreeAutomorphism, Word


# -- Fox calculus by the closed-form prefix sum -------------------------------------------


def fox_terms(word: Word, j: int, rank: int) -> dict[tuple[int, ...], int]:
    """Each x_j contributes +X^{ab(prefix)}, each x_j^-1 contributes -X^{ab(prefix x_j^-1)}."""
    out: dict[tuple[int, ...], int] = {}
    prefix = [0] * rank
    for x in word.letters:
        i = abs(x)
        if x < 0:
            prefix[i - 1] -= 1
        if i == j:
            key = tuple(prefix)
            out[key] = out.get(key, 0) + (1 if x > 0 else -1)
        if x > 0:
            prefix[i - 1] += 1
    return {k: v for k, v in out.items() if v}


# -- covers rebuilt from scratch ------------------------------------------------------------


def cover_data(factors, projection):
    """Vertices in product order, edge heads and BFS tree words (positive edges, generator order)."""
    elements = list(itertools.product(*(range(m) for m in factors)))
    index = {g: k for k, g in enumerate(elements)}
    rank = len(projection[0])

    def head(v, i):
        g = elements[v]
        return index[tuple((a + projection[r][i - 1]) % m for r, (a, m) in enumerate(zip(g, factors)))]

    words = {0: []}
    tree = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for i in range(1, rank + 1):
            w = head(v, i)
            if w not in words:
                words[w] = words[v] + [i]
                tree.add((v, i))
                queue.append(w)
    nontree = [(v, i) for v in range(len(elements)) for i in range(1, rank + 1) if (v, i) not in tree]
    return elements, head, words, nontree


def _free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def _apply(aut: FreeAutomorphism, letters):
    out = []
    for x in letters:
        img = list(aut.images[abs(x) - 1].letters)
        out += img if x > 0 else [-y for y in reversed(img)]
    return _free_reduce(out)


def schreier_homology(aut: FreeAutomorphism, factors, projection) -> list[list[int]]:
    """Reidemeister-Schreier: column k is the image of the k-th Schreier generator,
    counted in the non-tree edges it crosses."""
    elements, head, words, nontree = cover_data(factors, projection)
    pos = {e: k for k, e in enumerate(nontree)}
    cols = []
    for v, i in nontree:
        w = head(v, i)
        gen = words[v] + [i] + [-x for x in reversed(words[w])]
        img = _apply(aut, gen)
        col = [0] * len(nontree)
        cur = 0
        back = {}
        for u in range(len(elements)):
            for j in range(1, len(projection[0]) + 1):
                back[(head(u, j), j)] = u
        for x in img:
            if x > 0:
                e = (cur, x)
                nxt = head(cur, x)
                if e in pos:
                    col[pos[e]] += 1
            else:
                nxt = back[(cur, -x)]
                e = (nxt, -x)
                if e in pos:
                    col[pos[e]] -= 1
            cur = nxt
        assert cur == 0, "image of a Schreier generator must close up"
        cols.append(col)
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(nontree))]


# -- characteristic polynomials ---------------------------------------------------------------


def sympy_charpoly(m) -> list[int]:
    """Coefficients low degree first."""
    t = sympy.Symbol("t")
    p = sympy.Matrix(m).charpoly(t)
    return [int(c) for c in reversed(p.all_coeffs())]


# -- transition graphs: closed walks ------------------------------------------------------------


def closed_walk_sums(edges, vertices, rank: int, k: int) -> dict[tuple[int, ...], int]:
    """Signed translation sum over based closed walks of length k (every rotation counted).

    ``edges`` are ``(source, target, sign, translation)``.
    """
    out_edges = {v: [] for v in vertices}
    for s, t, sign, tr in edges:
        out_edges[s].append((t, sign, tuple(tr)))
    total: dict[tuple[int, ...], int] = {}

    def walk(start, cur, depth, sign, tr):
        if depth == k:
            if cur == start:
                total[tr] = total.get(tr, 0) + sign
            return
        for t, s, d in out_edges[cur]:
            walk(start, t, depth + 1, sign * s, tuple(a + b for a, b in zip(tr, d)))

    for v in vertices:
        walk(v, v, 0, 1, (0,) * rank)
    return {e: c for e, c in total.items() if c}


def closed_walks(edge_list, vertices, length: int):
    """All closed walks as edge-index tuples, each listed once per starting edge."""
    out_edges = {v: [] for v in vertices}
    for k, (s, t) in enumerate(edge_list):
        out_edges[s].append((k, t))
    found = []

    def walk(start, cur, path):
        if len(path) == length:
            if cur == start:
                found.append(tuple(path))
            return
        for k, t in out_edges[cur]:
            walk(start, t, path + [k])

    for v in vertices:
        walk(v, v, [])
    return found


def scaled(v, k) -> tuple[Fraction, ...]:
    return tuple(Fraction(x, k) for x in v)

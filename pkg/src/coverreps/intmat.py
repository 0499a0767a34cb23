"""
Exact integer matrix routines.

Matrices are numpy arrays with ``dtype=object`` holding Python ints (or
Fractions), so products never overflow. Internally most routines work on plain
lists of rows and convert at the boundary.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np


def as_matrix(rows, nrows: int | None = None, ncols: int | None = None) -> np.ndarray:
    """Convert nested sequences (or an array) to an exact object matrix."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(nrows or 0, ncols or 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def identity(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=object)


def to_rows(m) -> list[list]:
    return [list(r) for r in np.asarray(m, dtype=object)]


def mat_equal(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and bool(np.all(a == b))


def mat_pow(m: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return mat_pow(inverse(m), -k)
    result = identity(m.shape[0])
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def determinant(m) -> int | Fraction:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    a = [list(r) for r in np.asarray(m, dtype=object)]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return _normalize(sign * a[n - 1][n - 1])


def inverse(m) -> np.ndarray:
    """Exact inverse by Gauss-Jordan over the rationals.

    Entries come back as ints whenever they are integral.
    """
    a = [[Fraction(x) for x in r] for r in np.asarray(m, dtype=object)]
    n = len(a)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        inv[col] = [x / p for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return as_matrix([[_normalize(x) for x in r] for r in inv], n, n)


def int_inverse(m) -> np.ndarray:
    """Inverse of a unimodular integer matrix; raises if not integral."""
    inv = inverse(m)
    for x in inv.flat:
        if not isinstance(x, int):
            raise ValueError("matrix is not unimodular")
    return inv


def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular, the diagonal of ``D`` is nonnegative and
    each diagonal entry divides the next.
    """
    A = [list(map(int, r)) for r in np.asarray(a, dtype=object)]
    rows = len(A)
    cols = len(A[0]) if rows else np.asarray(a).shape[1] if np.asarray(a).ndim == 2 else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for r in A:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j] != 0]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return as_matrix(U, rows, rows), as_matrix(A, rows, cols), as_matrix(V, cols, cols)


def invariant_factors(a) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, d, _ = smith_normal_form(a)
    return [d[i, i] for i in range(min(d.shape)) if d[i, i] != 0]


def hermite_normal_form(a) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form: ``(H, U)`` with ``U @ A == H``.

    ``H`` is in row echelon form with positive pivots, entries above each
    pivot reduced into ``[0, pivot)``, and zero rows at the bottom.
    """
    A = [list(map(int, r)) for r in np.asarray(a, dtype=object)]
    rows = len(A)
    cols = np.asarray(a, dtype=object).shape[1] if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [(abs(A[i][c]), i) for i in range(r, rows) if A[i][c] != 0]
            if not nz:
                break
            _, piv = min(nz)
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, rows):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < rows and A[r][c] != 0:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            r += 1
    return as_matrix(A, rows, cols), as_matrix(U, rows, rows)


def integer_kernel(a) -> np.ndarray:
    """Columns form a lattice basis of ``{x in Z^n : A x = 0}``."""
    arr = np.asarray(a, dtype=object)
    n = arr.shape[1]
    if arr.shape[0] == 0:
        return identity(n)
    _, d, v = smith_normal_form(arr)
    rank = sum(1 for i in range(min(d.shape)) if d[i, i] != 0)
    return v[:, rank:]


def rref_mod(a, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over ``Z/p`` (nonzero rows only) and its pivot columns."""
    rows = [[int(x) % p for x in r] for r in np.asarray(a, dtype=object)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def solve_mod(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """One solution of ``A x = b (mod p)`` for prime ``p``, free variables set to 0."""
    rows = [[x % p for x in r] + [y % p] for r, y in zip(a, b)]
    ncols = len(rows[0]) - 1 if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g

"""
Chain-level and homology-level actions of lifted automorphisms, Magnus
matrices, and the decomposition of the chain action into character blocks.

Conventions: vectors are columns and column ``j`` of every matrix holds the
image of basis vector ``j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import intmat
from .covers import CoverGraph, LiftedAutomorphism
from .cyclotomic import Cyclo
from .free_group import FreeAutomorphism, fox_derivative
from .laurent import Character, LaurentPoly, RotationPoint, all_characters, specialize


@dataclass(frozen=True)
class ChainMatrix:
    """Action of a lift on 1-chains, rows and columns indexed by ``(i, g)``."""

    lifted: LiftedAutomorphism
    matrix: np.ndarray

    @property
    def cover(self) -> CoverGraph:
        return self.lifted.cover


def chain_action(lifted: LiftedAutomorphism) -> ChainMatrix:
    """Column ``(g, j)`` is the chain of the lift of ``aut(x_j)`` starting at ``sigma(g)``."""
    cover = lifted.cover
    aut = lifted.base
    m = intmat.zeros(cover.num_edges, cover.num_edges)
    for j in range(1, aut.rank + 1):
        image = aut.images[j - 1]
        for g in range(cover.order):
            chain, _ = cover.trace(image, lifted.vertex_map[g])
            col = cover.edge_index(g, j)
            for k, c in chain.items():
                m[k, col] += c
    return ChainMatrix(lifted, m)


def vertex_action_matrix(lifted: LiftedAutomorphism) -> np.ndarray:
    """Permutation matrix of the lift on vertices."""
    n = lifted.cover.order
    m = intmat.zeros(n, n)
    for g, s in enumerate(lifted.vertex_map):
        m[s, g] = 1
    return m


# -- Magnus matrices ------------------------------------------------------------------------


@dataclass(frozen=True)
class MagnusMatrix:
    rank: int
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def to_records(self) -> list[list[list]]:
        return [[p.to_records() for p in row] for row in self.entries]


def magnus_matrix(aut: FreeAutomorphism) -> MagnusMatrix:
    """Entry ``(i, j)`` is the Fox derivative of ``aut(x_j)`` with respect to ``x_i``."""
    n = aut.rank
    entries = tuple(tuple(fox_derivative(aut.images[j], i + 1, n) for j in range(n)) for i in range(n))
    return MagnusMatrix(n, entries)


def specialize_magnus(m: MagnusMatrix, point) -> list[list]:
    """Entrywise specialization. Exact (``Cyclo`` entries) at characters and
    rotation points, a complex numpy array otherwise."""
    rows = [[specialize(p, point) for p in row] for row in m.entries]
    if isinstance(point, (Character, RotationPoint)):
        return rows
    return np.array(rows, dtype=complex)


# -- block decomposition ---------------------------------------------------------------------


@dataclass
class BlockDecomposition:
    """Chain action in the character basis.

    ``blocks[(a, b)]`` is the n x n block from character ``b`` (source) to
    character ``a`` (target), indices into ``characters``. Zero blocks are
    omitted. ``residual`` measures ``|F B F^-1 - M|`` (0 in exact mode).
    """

    characters: list[Character]
    blocks: dict[tuple[int, int], list[list]]
    exact: bool
    residual: float = 0.0

    def nonzero_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.blocks)

    def block(self, a: int, b: int) -> list[list]:
        n = self.rank
        return self.blocks.get((a, b), [[0] * n for _ in range(n)])

    rank: int = 0

    def describe(self) -> list[dict]:
        out = []
        for (a, b), blk in sorted(self.blocks.items()):
            out.append({"target": self.characters[a].label(), "source": self.characters[b].label(),
                        "block": [[str(x) if self.exact else complex(x) for x in row] for row in blk]})
        return out


def _rotation_table(chars: list[Character], order: int) -> list[list[int]]:
    q = chars[0].quotient
    return [[int(ch.rotation(g) * order) for g in q.elements] for ch in chars]


def block_decompose(c: ChainMatrix, exact: bool = True, tol: float = 1e-12) -> BlockDecomposition:
    """Conjugate the chain matrix by the discrete Fourier basis.

    The basis vector for ``(xi, j)`` is ``sum_g conj(xi(g)) e_(j, g)``.
    """
    cover = c.cover
    q = cover.quotient
    n, size = cover.rank, cover.order
    chars = all_characters(q)
    expo = lcm(1, *q.invariant_factors)
    rot = _rotation_table(chars, expo)
    m = c.matrix
    if exact:
        entries = [(r, col, int(m[r, col])) for r in range(m.shape[0]) for col in range(m.shape[1])
                   if m[r, col]]
        blocks: dict[tuple[int, int], list[list]] = {}
        for a in range(size):
            for b in range(size):
                counts = [[[0] * expo for _ in range(n)] for _ in range(n)]
                ra, rb = rot[a], rot[b]
                for r, col, val in entries:
                    h, i = cover.edge_of_index(r)
                    g, j = cover.edge_of_index(col)
                    counts[i - 1][j - 1][(ra[h] - rb[g]) % expo] += val
                blk = [[Cyclo.from_counts(expo, counts[i][j]) / size for j in range(n)] for i in range(n)]
                if any(not x.is_zero() for row in blk for x in row):
                    blocks[(a, b)] = blk
        return BlockDecomposition(chars, blocks, True, 0.0, rank=n)
    f = fourier_matrix(cover, chars)
    mf = np.array(m, dtype=float)
    finv = np.conj(f.T) / size  # F is unitary up to the factor |G|
    conj = finv @ mf @ f
    blocks = {}
    for a in range(size):
        for b in range(size):
            blk = conj[a * n:(a + 1) * n, b * n:(b + 1) * n]
            if np.max(np.abs(blk)) > tol * max(1.0, np.max(np.abs(mf))):
                blocks[(a, b)] = blk.tolist()
    assembled = np.zeros_like(conj)
    for (a, b), blk in blocks.items():
        assembled[a * n:(a + 1) * n, b * n:(b + 1) * n] = blk
    residual = float(np.max(np.abs(f @ assembled @ finv - mf))) if mf.size else 0.0
    return BlockDecomposition(chars, blocks, False, residual, rank=n)


def fourier_matrix(cover: CoverGraph, chars: list[Character] | None = None) -> np.ndarray:
    """Columns ``(xi, j)`` (index ``xi * n + j``) in the chain basis ``(j, g)``."""
    chars = chars or all_characters(cover.quotient)
    n, size = cover.rank, cover.order
    f = np.zeros((n * size, n * size), dtype=complex)
    for a, ch in enumerate(chars):
        vals = [np.conj(ch.value(g).to_complex()) for g in cover.quotient.elements]
        for j in range(1, n + 1):
            for gi in range(size):
                f[cover.edge_index(gi, j), a * n + (j - 1)] = vals[gi]
    return f


def pushed_character(lifted: LiftedAutomorphism, ch: Character) -> Character:
    """``xi o sigma^-1``, the character whose block receives the image of ``xi``."""
    inv = [0] * len(lifted.vertex_map)
    for g, s in enumerate(lifted.vertex_map):
        inv[s] = g
    q = lifted.cover.quotient
    return ch.compose_with(lambda e: q.elements[inv[q.index(e)]])


def predicted_blocks(lifted: LiftedAutomorphism, exact: bool = True) -> dict[tuple[int, int], list[list]]:
    """Magnus specializations placed at ``(xi o sigma^-1, xi)`` for every character."""
    chars = all_characters(lifted.cover.quotient)
    where = {ch: k for k, ch in enumerate(chars)}
    mag = magnus_matrix(lifted.base)
    out = {}
    for b, ch in enumerate(chars):
        target = pushed_character(lifted, ch)
        point = target.torus_point()
        values = specialize_magnus(mag, point if exact else point.to_complex())
        out[(where[target], b)] = values if exact else np.asarray(values).tolist()
    return out


def compare_blocks(dec: BlockDecomposition, lifted: LiftedAutomorphism, tol: float = 1e-9) -> float | bool:
    """Compare the decomposition with the predicted Magnus blocks.

    Exact mode returns a bool; floating mode returns the maximal deviation.
    """
    pred = predicted_blocks(lifted, exact=dec.exact)
    keys = set(pred) | set(dec.blocks)
    n = lifted.cover.rank
    if dec.exact:
        for k in keys:
            got = dec.blocks.get(k)
            want = pred.get(k)
            for i in range(n):
                for j in range(n):
                    x = got[i][j] if got else 0
                    y = want[i][j] if want else 0
                    if not Cyclo.coerce(x) == Cyclo.coerce(y):
                        return False
        return True
    worst = 0.0
    for k in keys:
        got = np.array(dec.blocks.get(k, np.zeros((n, n))), dtype=complex)
        want = np.array(pred.get(k, np.zeros((n, n))), dtype=complex)
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


# -- homology -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyRep:
    cover: CoverGraph
    matrix: np.ndarray


def homology_rep(c: ChainMatrix) -> HomologyRep:
    """Restriction of the chain action to cycles, in the cycle basis."""
    cover = c.cover
    image = c.matrix @ cover.cycle_matrix
    rows = [cover.edge_index(g, i) for g, i in cover.nontree_edges]
    return HomologyRep(cover, image[rows, :])


def pushforward(cover: CoverGraph, chain: Sequence[int]) -> list[int]:
    """Image of a cover cycle in the rose: coefficients summed over each fiber."""
    if len(chain) != cover.num_edges:
        raise ValueError("chain has the wrong length")
    if any(cover.boundary(chain)):
        raise ValueError("chain is not a cycle")
    return [sum(chain[cover.edge_index(g, i)] for g in range(cover.order)) for i in range(1, cover.rank + 1)]


def transfer(cover: CoverGraph, cycle: Sequence[int]) -> list[int]:
    """Sum of all lifts of a rose cycle."""
    if len(cycle) != cover.rank:
        raise ValueError("base cycle has the wrong length")
    out = [0] * cover.num_edges
    for i in range(1, cover.rank + 1):
        for g in range(cover.order):
            out[cover.edge_index(g, i)] = cycle[i - 1]
    return out


def format_matrix(m) -> str:
    """Dimension header followed by one line of integers per row."""
    arr = np.asarray(m, dtype=object)
    lines = [f"{arr.shape[0]} {arr.shape[1]}"]
    lines += [" ".join(str(x) for x in row) for row in arr]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    r, c = int(lines[0][0]), int(lines[0][1])
    rows = [[int(x) for x in ln] for ln in lines[1:]]
    if len(rows) != r or any(len(x) != c for x in rows):
        raise ValueError("matrix text does not match its dimension header")
    return intmat.as_matrix(rows, r, c)

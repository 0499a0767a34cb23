"""
Finite abelian covers of the rose and the automorphisms that lift to them.

A cover is described by a surjection ``P: Z^n -> G``. Its vertices are the
elements of ``G``; the edge ``(g, i)`` runs from ``g`` to ``g + P e_i``. Chains
are integer vectors indexed by ``(i - 1) * |G| + index(g)``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterator, Sequence

import numpy as np

from . import intmat
from .free_group import (FreeAutomorphism, Word, compose_many, evaluate_formal, reduce,
                         _trusted)
from .laurent import FiniteAbelianQuotient


class NotLiftable(ValueError):
    """The automorphism does not preserve the kernel of the cover."""


class NoAdmissibleCover(ValueError):
    """The coinvariant lattice is trivial, so no admissible cover exists."""

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


class InconsistentBoundary(ValueError):
    """No character kills the complement and sends every boundary class to 1."""


# -- coinvariant lattice ----------------------------------------------------------------


@dataclass(frozen=True)
class CoinvariantLattice:
    """``Z^n`` modulo the span of ``(A - I) v``: free part, torsion, projection.

    ``projection`` maps ``Z^n`` onto the free part ``Z^free_rank``; its rows are
    in Hermite normal form, which makes the description canonical.
    """

    rank: int
    free_rank: int
    torsion: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.projection)

    def describe(self) -> dict:
        return {"rank": self.rank, "free_rank": self.free_rank, "torsion": list(self.torsion),
                "projection": [list(r) for r in self.projection]}


def coinvariant_lattice(gens: Sequence[FreeAutomorphism], rank: int | None = None) -> CoinvariantLattice:
    """Torsion-free coinvariants of the abelianized action of ``gens``."""
    if not gens and rank is None:
        raise ValueError("rank is required when there are no generators")
    n = gens[0].rank if gens else rank
    if any(g.rank != n for g in gens):
        raise ValueError("generators have different ranks")
    return lattice_of_matrices([g.abelianization for g in gens], n)


def lattice_of_matrices(mats: Sequence, n: int) -> CoinvariantLattice:
    """Torsion-free coinvariants of integer matrices acting on ``Z^n``."""
    cols = []
    for a in mats:
        a = intmat.as_matrix(a)
        for j in range(n):
            col = [a[i, j] - (1 if i == j else 0) for i in range(n)]
            if any(col):
                cols.append(col)
    if not cols:
        return CoinvariantLattice(n, n, (), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
    b = intmat.as_matrix([[c[i] for c in cols] for i in range(n)])
    u, d, _ = intmat.smith_normal_form(b)
    diag = [d[i, i] for i in range(min(d.shape))]
    r = sum(1 for x in diag if x != 0)
    torsion = tuple(int(x) for x in diag if x > 1)
    free = u[r:, :]
    if free.shape[0]:
        h, _ = intmat.hermite_normal_form(free)
        rows = tuple(tuple(int(x) for x in row) for row in intmat.to_rows(h))
    else:
        rows = ()
    return CoinvariantLattice(n, n - r, torsion, rows)


# -- admissible quotients -----------------------------------------------------------------


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % d for d in range(2, int(m ** 0.5) + 1))


def _factor_types(r: int, m: int, max_order: int | None) -> list[tuple[int, ...]]:
    """Invariant-factor tuples ``d_1 | d_2 | ... | d_k`` with every ``d_i | m``, in canonical order."""
    divs = [d for d in range(2, m + 1) if m % d == 0]
    out = []

    def grow(prefix: tuple[int, ...], order: int):
        if prefix:
            out.append(prefix)
        if len(prefix) == r:
            return
        for d in divs:
            if prefix and d % prefix[-1]:
                continue
            if max_order is not None and order * d > max_order:
                continue
            grow(prefix + (d,), order * d)

    grow((), 1)
    return sorted(out, key=lambda t: (len(t), t))


def _kernel_key(q: FiniteAbelianQuotient) -> tuple:
    h, _ = intmat.hermite_normal_form(kernel_basis(q).T)
    return tuple(tuple(int(x) for x in row) for row in intmat.to_rows(h) if any(row))


def _reversed_rref(r: int, k: int, p: int) -> Iterator[list[list[int]]]:
    """Row-reversed RREF matrices of rank ``k`` over ``Z/p``, in row-major lex order.

    These are exactly the lex-smallest bases of the ``k``-dimensional subspaces
    of ``(Z/p)^r``: row ``i`` has a leading 1 left of every earlier row's
    leading 1 and zeros in their pivot columns.
    """
    def rows_from(prefix: list[list[int]], pivots: list[int]):
        if len(prefix) == k:
            yield [list(x) for x in prefix]
            return
        limit = pivots[-1] if pivots else r
        for lead in range(limit - 1, -1, -1):
            free = [j for j in range(lead + 1, r) if j not in pivots]
            for tail in itertools.product(range(p), repeat=len(free)):
                row = [0] * r
                row[lead] = 1
                for j, v in zip(free, tail):
                    row[j] = v
                yield from rows_from(prefix + [row], pivots + [lead])

    yield from rows_from([], [])


def _prime_quotients(lattice: CoinvariantLattice, p: int, max_order: int | None) -> Iterator[FiniteAbelianQuotient]:
    r = lattice.free_rank
    reduced, _ = intmat.rref_mod(lattice.projection, p)
    for k in range(1, r + 1):
        if max_order is not None and p ** k > max_order:
            break
        for b in _reversed_rref(r, k, p):
            rows = tuple(tuple(sum(bi * reduced[i][j] for i, bi in enumerate(row)) % p
                               for j in range(lattice.rank)) for row in b)
            yield FiniteAbelianQuotient((p,) * k, rows, lattice.rank)


def _exhaustive_quotients(lattice: CoinvariantLattice, m: int, max_order: int | None) -> list[FiniteAbelianQuotient]:
    """Every surjection of each type, deduplicated by kernel keeping the lex-smallest projection."""
    r = lattice.free_rank
    p = intmat.as_matrix(lattice.projection)
    out = []
    for factors in _factor_types(r, m, max_order):
        seen: dict[tuple, tuple] = {}
        for entries in itertools.product(*(range(d) for d in factors for _ in range(r))):
            a = [entries[i * r:(i + 1) * r] for i in range(len(factors))]
            rows = tuple(tuple(int(x) % d for x in (intmat.as_matrix([row]) @ p)[0])
                         for row, d in zip(a, factors))
            try:
                q = FiniteAbelianQuotient(factors, rows, lattice.rank)
            except ValueError:
                continue
            key = _kernel_key(q)
            if key not in seen or q.projection < seen[key]:
                seen[key] = q.projection
        out += [FiniteAbelianQuotient(factors, proj, lattice.rank) for proj in sorted(seen.values())]
    return out


def admissible_quotients(lattice: CoinvariantLattice, m: int, *, max_order: int | None = None,
                         limit: int | None = None, exhaustive: bool = False) -> list[FiniteAbelianQuotient]:
    """Quotients of ``Z^n`` through the coinvariant lattice reduced mod ``m``.

    Every sublattice ``L`` with ``m Z^r <= L < Z^r`` of the free part gives the
    quotient ``Z^n -> Z^r -> Z^r / L``. Each is represented by the
    lexicographically smallest projection with that kernel, and results are
    sorted by the number of invariant factors, the factors, then the
    projection. ``max_order`` bounds ``|G|``; ``limit`` truncates the list.
    An empty list means the lattice is trivial (or the bound excludes all).

    Prime moduli are enumerated lazily in this order (so ``limit`` stays cheap
    on large lattices); ``exhaustive=True`` forces the brute-force route.
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if lattice.free_rank == 0:
        return []
    if _is_prime(m) and not exhaustive:
        return list(itertools.islice(_prime_quotients(lattice, m, max_order), limit))
    out = _exhaustive_quotients(lattice, m, max_order)
    return out[:limit] if limit is not None else out


def kernel_basis(q: FiniteAbelianQuotient) -> np.ndarray:
    """Columns span ``ker(P: Z^n -> G)``."""
    n, r = q.rank, len(q.invariant_factors)
    if r == 0:
        return intmat.identity(n)
    # solve P x + diag(m) y = 0 and keep x
    big = [list(row) + [q.invariant_factors[i] if j == i else 0 for j in range(r)]
           for i, row in enumerate(q.projection)]
    k = intmat.integer_kernel(big)
    x = k[:n, :]
    h, _ = intmat.hermite_normal_form(x.T)
    rows = [row for row in intmat.to_rows(h) if any(row)]
    return intmat.as_matrix(rows).T


# -- covers -------------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverGraph:
    """The cover of the n-petal rose with deck group ``quotient``."""

    quotient: FiniteAbelianQuotient

    @property
    def rank(self) -> int:
        return self.quotient.rank

    @property
    def order(self) -> int:
        return self.quotient.order

    @property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        return self.quotient.elements

    @property
    def base_vertex(self) -> int:
        return 0

    @property
    def num_edges(self) -> int:
        return self.rank * self.order

    @property
    def homology_rank(self) -> int:
        return self.order * (self.rank - 1) + 1

    def edge_index(self, g: int, i: int) -> int:
        """Chain index of edge ``(g, i)``; ``g`` a vertex index, ``i`` 1-based."""
        return (i - 1) * self.order + g

    def edge_of_index(self, k: int) -> tuple[int, int]:
        return k % self.order, k // self.order + 1

    @cached_property
    def _steps(self) -> tuple[tuple[int, ...], ...]:
        """``_steps[i-1][g]`` is the head of edge ``(g, i)``."""
        q = self.quotient
        out = []
        for i in range(1, self.rank + 1):
            step = q.generator_image(i)
            out.append(tuple(q.index(q.add(g, step)) for g in q.elements))
        return tuple(out)

    @cached_property
    def _back(self) -> tuple[tuple[int, ...], ...]:
        """``_back[i-1][h]`` is the tail of the edge ``(., i)`` ending at ``h``."""
        out = []
        for fwd in self._steps:
            inv = [0] * self.order
            for g, h in enumerate(fwd):
                inv[h] = g
            out.append(tuple(inv))
        return tuple(out)

    def head(self, g: int, i: int) -> int:
        return self._steps[i - 1][g]

    def tail(self, g: int, i: int) -> int:
        return g

    def translate(self, g: int, h: int) -> int:
        """Vertex index of ``elements[g] + elements[h]``."""
        q = self.quotient
        return q.index(q.add(q.elements[g], q.elements[h]))

    @cached_property
    def _tree(self) -> tuple[dict[int, Word], frozenset[tuple[int, int]]]:
        words = {0: Word()}
        tree = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for i in range(1, self.rank + 1):
                w = self.head(v, i)
                if w not in words:
                    words[w] = reduce(words[v].letters + (i,))
                    tree.add((v, i))
                    queue.append(w)
        if len(words) != self.order:
            raise ValueError("cover graph is disconnected")
        return words, frozenset(tree)

    @property
    def tree_words(self) -> dict[int, Word]:
        """Word spelled by the spanning-tree path from the base to each vertex."""
        return self._tree[0]

    @property
    def spanning_tree(self) -> frozenset[tuple[int, int]]:
        return self._tree[1]

    @cached_property
    def nontree_edges(self) -> tuple[tuple[int, int], ...]:
        """Non-tree edges ``(vertex, generator)`` in lexicographic order."""
        return tuple((g, i) for g in range(self.order) for i in range(1, self.rank + 1)
                     if (g, i) not in self.spanning_tree)

    @cached_property
    def nontree_position(self) -> dict[int, int]:
        """Chain index of a non-tree edge -> its position in the cycle basis."""
        return {self.edge_index(g, i): k for k, (g, i) in enumerate(self.nontree_edges)}

    def trace(self, word: Word | Sequence[int], start: int = 0) -> tuple[dict[int, int], int]:
        """Lift a word from vertex ``start``: the chain it covers and its end vertex."""
        chain: dict[int, int] = {}
        v = start
        letters = word.letters if isinstance(word, Word) else word
        for x in letters:
            i = abs(x)
            if x > 0:
                k = self.edge_index(v, i)
                chain[k] = chain.get(k, 0) + 1
                v = self.head(v, i)
            else:
                u = self._back[i - 1][v]
                k = self.edge_index(u, i)
                chain[k] = chain.get(k, 0) - 1
                v = u
        return chain, v

    def trace_edges(self, word: Word, start: int = 0) -> tuple[list[tuple[int, int]], int]:
        """Lift a word as the sequence of (chain index, sign) it traverses."""
        out = []
        v = start
        for x in word.letters:
            i = abs(x)
            if x > 0:
                out.append((self.edge_index(v, i), 1))
                v = self.head(v, i)
            else:
                u = self._back[i - 1][v]
                out.append((self.edge_index(u, i), -1))
                v = u
        return out, v

    def chain_vector(self, chain: dict[int, int]) -> list[int]:
        v = [0] * self.num_edges
        for k, c in chain.items():
            v[k] += c
        return v

    @cached_property
    def generator_words(self) -> tuple[Word, ...]:
        """Free basis of the cover's fundamental group, one word per non-tree edge."""
        words = self.tree_words
        out = []
        for g, i in self.nontree_edges:
            out.append(reduce(words[g].letters + (i,) + words[self.head(g, i)].inverse().letters))
        return tuple(out)

    @cached_property
    def cycle_basis(self) -> tuple[tuple[int, ...], ...]:
        """Chain vectors of the fundamental cycles of the non-tree edges."""
        out = []
        for w in self.generator_words:
            chain, end = self.trace(w)
            assert end == 0
            out.append(tuple(self.chain_vector(chain)))
        return tuple(out)

    @cached_property
    def cycle_matrix(self) -> np.ndarray:
        """``(n|G|) x rank`` matrix with the basis cycles as columns."""
        return intmat.as_matrix([list(c) for c in self.cycle_basis]).T.reshape(
            self.num_edges, len(self.cycle_basis))

    def boundary(self, chain: Sequence[int]) -> list[int]:
        """Vertex vector ``sum c_e (head(e) - tail(e))``."""
        out = [0] * self.order
        for k, c in enumerate(chain):
            if c:
                g, i = self.edge_of_index(k)
                out[self.head(g, i)] += c
                out[g] -= c
        return out

    @cached_property
    def boundary_matrix(self) -> np.ndarray:
        m = intmat.zeros(self.order, self.num_edges)
        for k in range(self.num_edges):
            g, i = self.edge_of_index(k)
            m[self.head(g, i), k] += 1
            m[g, k] -= 1
        return m

    def cycle_coordinates(self, chain: Sequence[int]) -> list[int]:
        """Coordinates of a cycle in the cycle basis (its non-tree coefficients)."""
        if any(self.boundary(chain)):
            raise ValueError("chain is not a cycle")
        return [chain[self.edge_index(g, i)] for g, i in self.nontree_edges]

    def describe(self) -> dict:
        return {"quotient": self.quotient.describe(), "order": self.order,
                "homology_rank": self.homology_rank}

    def to_dot(self, name: str = "cover") -> str:
        """Plain-text digraph; tree edges are drawn bold."""
        tree = self.spanning_tree
        lines = [f"digraph {name} {{"]
        for k, g in enumerate(self.vertices):
            lines.append(f'  {k} [label="{",".join(map(str, g))}"];')
        for i in range(1, self.rank + 1):
            for g in range(self.order):
                style = ", style=bold" if (g, i) in tree else ""
                lines.append(f'  {g} -> {self.head(g, i)} [label="x{i}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_cover(q: FiniteAbelianQuotient) -> CoverGraph:
    """The covering graph of the rose for a surjection onto a finite abelian group."""
    if q.invariant_factors and not q._surjective():
        raise ValueError("projection is not surjective")
    return CoverGraph(q)


# -- lifting ------------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftedAutomorphism:
    """The base-fixing lift of ``base`` to ``cover``.

    ``vertex_map[g]`` is the vertex index of ``sigma(g)``, the induced deck
    group automorphism.
    """

    base: FreeAutomorphism
    cover: CoverGraph
    vertex_map: tuple[int, ...]
    base_lift_fixed: bool = True

    @property
    def deck_trivial(self) -> bool:
        return all(g == s for g, s in enumerate(self.vertex_map))

    def deck_action(self, g: Sequence[int]) -> tuple[int, ...]:
        q = self.cover.quotient
        return q.elements[self.vertex_map[q.index(g)]]

    @cached_property
    def deck_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Images of the standard generators of ``G`` under sigma."""
        q = self.cover.quotient
        r = len(q.invariant_factors)
        return tuple(self.deck_action(tuple(int(k == i) for k in range(r))) for i in range(r))


def lift_automorphism(aut: FreeAutomorphism, q: FiniteAbelianQuotient | CoverGraph) -> LiftedAutomorphism:
    cover = q if isinstance(q, CoverGraph) else build_cover(q)
    quot = cover.quotient
    if aut.rank != quot.rank:
        raise ValueError(f"rank mismatch: automorphism {aut.rank}, cover {quot.rank}")
    a = aut.abelianization
    images = [tuple(int(x) for x in a[:, j]) for j in range(aut.rank)]
    step = [quot.project(v) for v in images]
    sigma = []
    for g in range(cover.order):
        ab = cover.tree_words[g].exponent_sum(aut.rank)
        v = [sum(a[i, j] * ab[j] for j in range(aut.rank)) for i in range(aut.rank)]
        sigma.append(quot.index(quot.project(v)))
    for g in range(cover.order):
        for i in range(1, aut.rank + 1):
            expected = quot.index(quot.add(quot.elements[sigma[g]], step[i - 1]))
            if sigma[cover.head(g, i)] != expected:
                raise NotLiftable(f"{aut} does not preserve the kernel of {quot.describe()}")
    return LiftedAutomorphism(aut, cover, tuple(sigma))


def lifts(aut: FreeAutomorphism, q: FiniteAbelianQuotient | CoverGraph) -> bool:
    try:
        lift_automorphism(aut, q)
    except NotLiftable:
        return False
    return True


# -- rebasing (Reidemeister-Schreier) ------------------------------------------------------


def rebase(lifted: LiftedAutomorphism) -> FreeAutomorphism:
    """The lift as an automorphism of the cover's free fundamental group.

    Generator k corresponds to the k-th non-tree edge; its image is read off by
    tracing the image word through the cover and recording non-tree edges.
    """
    images = _rebase_images(lifted.base, lifted.cover)
    inverse = None
    if lifted.base.inverse_images is not None:
        inv = _trusted(lifted.base.rank, lifted.base.inverse_images, lifted.base.images)
        inverse = _rebase_images(inv, lifted.cover)
        # both directions are lifts of mutually inverse maps, so they invert each other
        return _trusted(lifted.cover.homology_rank, images, inverse)
    return FreeAutomorphism(lifted.cover.homology_rank, images)


def _rebase_images(aut: FreeAutomorphism, cover: CoverGraph) -> tuple[Word, ...]:
    pos = cover.nontree_position
    out = []
    for w in cover.generator_words:
        steps, end = cover.trace_edges(aut.apply(w))
        if end != 0:
            raise NotLiftable(f"{aut} does not preserve the cover's kernel")
        letters = [(pos[k] + 1) * s for k, s in steps if k in pos]
        out.append(reduce(letters))
    return tuple(out)


# -- boundary splitting ---------------------------------------------------------------------


def boundary_split_quotient(boundary_words: Sequence[Word], complement_basis: Sequence, p: int,
                            rank: int | None = None) -> FiniteAbelianQuotient:
    """A character to ``Z/p`` killing the complement and sending every boundary class to 1."""
    n = rank
    if n is None:
        n = max([w.max_generator for w in boundary_words]
                + [b.max_generator if isinstance(b, Word) else len(b) for b in complement_basis] + [1])
    rows, rhs = [], []
    for w in boundary_words:
        rows.append(w.exponent_sum(n))
        rhs.append(1)
    for b in complement_basis:
        v = b.exponent_sum(n) if isinstance(b, Word) else list(b) + [0] * (n - len(b))
        rows.append(v)
        rhs.append(0)
    chi = intmat.solve_mod(rows, rhs, p) if rows else [0] * n
    if chi is None or not any(chi):
        raise InconsistentBoundary("boundary classes are inconsistent modulo the complement")
    return FiniteAbelianQuotient((p,), (tuple(chi),), n)


# -- (p, q) towers ------------------------------------------------------------------------------


def schreier_words(m: int, q: int) -> list[Word]:
    """Schreier generators of the kernel of ``F_m -> (Z/q)^m``.

    Transversal: ``s_1^c_1 ... s_m^c_m`` with ``0 <= c_i < q``.
    """
    if q == 1:
        return [Word.generator(i) for i in range(1, m + 1)]
    out = []
    seen = set()
    for c in itertools.product(range(q), repeat=m):
        t = [i + 1 for i in range(m) for _ in range(c[i])]
        for j in range(m):
            c2 = list(c)
            c2[j] = (c2[j] + 1) % q
            rep = [i + 1 for i in range(m) for _ in range(c2[i])]
            w = reduce(t + [j + 1] + [-x for x in reversed(rep)])
            if w and w not in seen:
                seen.add(w)
                out.append(w)
    return out


@dataclass(frozen=True)
class TowerLevel:
    level: int
    cover: CoverGraph
    generators: tuple[FreeAutomorphism, ...]
    prime_pair: tuple[int, int] | None
    deck_trivial: bool

    def describe(self) -> dict:
        return {"level": self.level, "prime_pair": list(self.prime_pair) if self.prime_pair else None,
                "cover": self.cover.describe(), "generators": len(self.generators),
                "deck_trivial": self.deck_trivial}


def enlarge(gens: Sequence[FreeAutomorphism], q: int) -> list[FreeAutomorphism]:
    """Concrete automorphisms for the Schreier generators of the index-q^m formal subgroup."""
    if not gens:
        return []
    rank = gens[0].rank
    with_inv = [g.with_inverse() for g in gens]
    return [evaluate_formal(w, with_inv, rank) for w in schreier_words(len(gens), q)]


def pq_tower(gamma0_gens: Sequence[FreeAutomorphism], prime_pairs: Sequence[tuple[int, int]],
             depth: int, rank: int | None = None) -> list[TowerLevel]:
    """Build ``depth`` levels of admissible covers, re-basing each level as a rose."""
    if depth > len(prime_pairs):
        raise ValueError("need one prime pair per level")
    n = gamma0_gens[0].rank if gamma0_gens else rank
    if n is None:
        raise ValueError("rank is required when there are no generators")
    current = tuple(gamma0_gens)
    levels = [TowerLevel(0, build_cover(FiniteAbelianQuotient.trivial(n)), current, None, True)]
    for lvl in range(depth):
        p, q = prime_pairs[lvl]
        enlarged = enlarge(current, q)
        lattice = coinvariant_lattice(enlarged, rank=levels[-1].cover.homology_rank)
        quotients = admissible_quotients(lattice, p, limit=1)
        if not quotients:
            raise NoAdmissibleCover(f"coinvariant lattice is trivial at level {lvl + 1}", lvl + 1)
        cover = build_cover(quotients[0])
        lifted = [lift_automorphism(g, cover) for g in enlarged]
        trivial = all(l.deck_trivial for l in lifted)
        if not trivial:
            raise NotLiftable(f"deck action not trivial at level {lvl + 1}")
        current = tuple(rebase(l) for l in lifted)
        levels.append(TowerLevel(lvl + 1, cover, current, (p, q), trivial))
    return levels

"""
Multivariate Laurent polynomials with rational coefficients, finite abelian
quotients of Z^n, their group rings and characters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm, prod
from typing import Iterable, Iterator, Mapping, Sequence

from . import intmat
from .cyclotomic import Cyclo

Exponent = tuple[int, ...]


class LaurentPoleError(ValueError):
    """Specialization at a point with a zero coordinate."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """
    A Laurent polynomial in ``X1..Xn`` with rational coefficients.

    Values are treated as immutable. Terms map exponent tuples to nonzero
    coefficients.

    >>> x = LaurentPoly.variable(2, 1)
    >>> str((x - 1) * (x + 1))
    'X1^2 - 1'
    """

    __slots__ = ("rank", "terms", "_key")

    def __init__(self, rank: int, terms: Mapping[Exponent, int | Fraction] | None = None):
        self.rank = rank
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != rank:
                raise ValueError(f"exponent {e} has wrong length for rank {rank}")
            c = _norm(Fraction(c)) if not isinstance(c, int) else c
            if c:
                clean[e] = c
        self.terms = clean
        self._key = None

    @classmethod
    def constant(cls, rank: int, c=1) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c=1) -> "LaurentPoly":
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def variable(cls, rank: int, i: int, power: int = 1) -> "LaurentPoly":
        e = [0] * rank
        e[i - 1] = power
        return cls(rank, {tuple(e): 1})

    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls(rank, {})

    def sorted_terms(self) -> list[tuple[Exponent, int | Fraction]]:
        return sorted(self.terms.items())

    def _sort(self):
        if self._key is None:
            self._key = tuple(self.sorted_terms())
        return self._key

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, self._sort()))

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
            return other
        return LaurentPoly.constant(self.rank, other)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.rank, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out: dict[Exponent, int | Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.rank, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return LaurentPoly(self.rank, {tuple(x * k for x in e): Fraction(1) / Fraction(c) ** -k})
        result = LaurentPoly.constant(self.rank, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def support(self) -> list[Exponent]:
        return sorted(self.terms)

    def specialize(self, point):
        return specialize(self, point)

    def to_records(self) -> list[list]:
        """``[exponent, numerator, denominator]`` records in sorted order."""
        return [[list(e), Fraction(c).numerator, Fraction(c).denominator] for e, c in self.sorted_terms()]

    @classmethod
    def from_records(cls, rank: int, records: Iterable[Sequence]) -> "LaurentPoly":
        out: dict[Exponent, Fraction] = {}
        for e, num, den in records:
            key = tuple(e)
            out[key] = out.get(key, 0) + Fraction(num, den)
        return cls(rank, out)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.rank}, {dict(self.sorted_terms())!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))):
            mono = "*".join(f"X{i + 1}" + (f"^{x}" if x != 1 else "") for i, x in enumerate(e) if x)
            neg = c < 0
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if parts:
                parts.append((" - " if neg else " + ") + body)
            else:
                parts.append(("-" if neg else "") + body)
        return "".join(parts)


# -- specialization -----------------------------------------------------------------


@dataclass(frozen=True)
class RotationPoint:
    """A torus point whose coordinates are ``exp(2 pi i q_j)`` for rational ``q_j``."""

    rotations: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "rotations", tuple(Fraction(q) % 1 for q in self.rotations))

    @property
    def order(self) -> int:
        return lcm(1, *(q.denominator for q in self.rotations))

    def to_complex(self) -> list[complex]:
        return [Cyclo.root(q.denominator, q.numerator).to_complex() for q in self.rotations]


def specialize(p: LaurentPoly, point):
    """Evaluate ``p`` at a torus point.

    ``point`` is a ``Character`` or ``RotationPoint`` (exact evaluation, a
    ``Cyclo`` result) or a sequence of nonzero numbers (complex floating point).
    """
    if isinstance(point, Character):
        point = point.torus_point()
    if isinstance(point, RotationPoint):
        if len(point.rotations) != p.rank:
            raise ValueError("point dimension does not match the polynomial rank")
        n = point.order
        scaled = [int(q * n) for q in point.rotations]
        counts = [0] * n
        for e, c in p.terms.items():
            k = sum(a * b for a, b in zip(e, scaled)) % n
            counts[k] += c
        return Cyclo.from_counts(n, counts)
    coords = [complex(z) for z in point]
    if len(coords) != p.rank:
        raise ValueError("point dimension does not match the polynomial rank")
    if any(z == 0 for z in coords):
        raise LaurentPoleError("Laurent polynomial evaluated at a zero coordinate")
    acc = 0j
    for e, c in p.terms.items():
        term = complex(float(c))
        for z, x in zip(coords, e):
            if x:
                term *= z ** x
        acc += term
    return acc


# -- finite abelian quotients ---------------------------------------------------------


@dataclass(frozen=True)
class FiniteAbelianQuotient:
    """
    A surjection ``Z^n -> Z/m_1 + ... + Z/m_r`` given by an ``r x n`` matrix.

    >>> q = FiniteAbelianQuotient((2,), ((1, 0),))
    >>> q.order, q.project((3, 5))
    (2, (1,))
    """

    invariant_factors: tuple[int, ...]
    projection: tuple[tuple[int, ...], ...]
    rank: int = -1

    def __post_init__(self):
        m = tuple(int(x) for x in self.invariant_factors)
        if any(x < 2 for x in m):
            raise ValueError("invariant factors must be at least 2")
        rows = tuple(tuple(int(v) % mi for v in row) for row, mi in zip(self.projection, m))
        if len(rows) != len(m):
            raise ValueError("projection needs one row per invariant factor")
        n = self.rank
        if n < 0:
            if not rows:
                raise ValueError("rank must be given for the trivial quotient")
            n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("projection rows have inconsistent length")
        object.__setattr__(self, "invariant_factors", m)
        object.__setattr__(self, "projection", rows)
        object.__setattr__(self, "rank", n)
        if m and not self._surjective():
            raise ValueError("projection is not surjective")

    @classmethod
    def trivial(cls, rank: int) -> "FiniteAbelianQuotient":
        return cls((), (), rank)

    def _surjective(self) -> bool:
        r = len(self.invariant_factors)
        big = [list(row) + [self.invariant_factors[i] if j == i else 0 for j in range(r)]
               for i, row in enumerate(self.projection)]
        f = intmat.invariant_factors(big)
        return len(f) == r and all(x == 1 for x in f)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        """All group elements in ``itertools.product`` order; the identity first."""
        return tuple(itertools.product(*(range(m) for m in self.invariant_factors)))

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {g: k for k, g in enumerate(self.elements)}

    def index(self, g: Sequence[int]) -> int:
        return self._index[self.normalize(g)]

    def normalize(self, g: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % m for x, m in zip(g, self.invariant_factors))

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.invariant_factors)

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, v)) % m
                     for row, m in zip(self.projection, self.invariant_factors))

    def generator_image(self, j: int) -> tuple[int, ...]:
        """Image of the basis vector ``e_j`` (1-based)."""
        return tuple(row[j - 1] for row in self.projection)

    def add(self, g: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(g, h, self.invariant_factors))

    def neg(self, g: Sequence[int]) -> tuple[int, ...]:
        return tuple((-a) % m for a, m in zip(g, self.invariant_factors))

    def describe(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors),
                "projection": [list(r) for r in self.projection], "rank": self.rank}

    @classmethod
    def from_description(cls, d: Mapping) -> "FiniteAbelianQuotient":
        return cls(tuple(d["invariant_factors"]), tuple(tuple(r) for r in d["projection"]), d["rank"])


@dataclass(frozen=True)
class Character:
    """``g -> exp(2 pi i sum q_i g_i)`` on a finite abelian quotient."""

    quotient: FiniteAbelianQuotient
    rotation_numbers: tuple[Fraction, ...]

    def __post_init__(self):
        rots = tuple(Fraction(q) % 1 for q in self.rotation_numbers)
        for q, m in zip(rots, self.quotient.invariant_factors):
            if m % q.denominator:
                raise ValueError(f"rotation number {q} is not a multiple of 1/{m}")
        if len(rots) != len(self.quotient.invariant_factors):
            raise ValueError("one rotation number per invariant factor")
        object.__setattr__(self, "rotation_numbers", rots)

    @property
    def is_trivial(self) -> bool:
        return not any(self.rotation_numbers)

    def rotation(self, g: Sequence[int]) -> Fraction:
        return sum((q * x for q, x in zip(self.rotation_numbers, g)), Fraction(0)) % 1

    def value(self, g: Sequence[int]) -> Cyclo:
        q = self.rotation(g)
        return Cyclo.root(q.denominator, q.numerator)

    def conjugate(self) -> "Character":
        return Character(self.quotient, tuple(-q for q in self.rotation_numbers))

    def torus_point(self) -> RotationPoint:
        """Coordinates ``X_j = xi(projection(e_j))``."""
        return RotationPoint(tuple(self.rotation(self.quotient.generator_image(j))
                                   for j in range(1, self.quotient.rank + 1)))

    def compose_with(self, sigma) -> "Character":
        """``xi o sigma`` for an automorphism ``sigma`` of the group given as a
        function on residue tuples."""
        q = self.quotient
        rots = []
        for i, m in enumerate(q.invariant_factors):
            e = tuple(int(k == i) for k in range(len(q.invariant_factors)))
            rots.append(self.rotation(sigma(e)))
        # value on e_i determines the character
        return Character(q, tuple(rots))

    def label(self) -> str:
        return "(" + ",".join(str(x) for x in self.rotation_numbers) + ")"


def all_characters(q: FiniteAbelianQuotient) -> list[Character]:
    """All characters, trivial first, in ``itertools.product`` order of numerators."""
    return [Character(q, tuple(Fraction(a, m) for a, m in zip(nums, q.invariant_factors)))
            for nums in q.elements]


@dataclass(frozen=True)
class GroupRingElement:
    quotient: FiniteAbelianQuotient
    terms: Mapping[tuple[int, ...], int | Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[tuple[int, ...], int | Fraction] = {}
        for g, c in self.terms.items():
            g = self.quotient.normalize(g)
            clean[g] = clean.get(g, 0) + c
        object.__setattr__(self, "terms", {g: _norm(Fraction(c)) for g, c in clean.items() if c})

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.quotient == other.quotient \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.quotient, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElement(self.quotient, out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.quotient, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        out: dict[tuple[int, ...], int | Fraction] = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = self.quotient.add(g, h)
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement(self.quotient, out)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[tuple[int, ...], int | Fraction]]:
        return iter(sorted(self.terms.items()))


def push_to_quotient(p: LaurentPoly, q: FiniteAbelianQuotient) -> GroupRingElement:
    """Map each monomial ``X^e`` to the group element ``projection(e)``."""
    if p.rank != q.rank:
        raise ValueError(f"rank mismatch: polynomial {p.rank}, quotient {q.rank}")
    out: dict[tuple[int, ...], int | Fraction] = {}
    for e, c in p.terms.items():
        g = q.project(e)
        out[g] = out.get(g, 0) + c
    return GroupRingElement(q, out)

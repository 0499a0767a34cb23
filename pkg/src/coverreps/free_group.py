"""
Reduced words and automorphisms of a free group F_n.

Generators are numbered from 1. A word stores its letters as signed integers:
``+i`` is the generator ``x_i`` and ``-i`` its inverse. The text syntax uses
the letters of ``GENERATOR_LETTERS`` (``x y z w a b c ...``) for generators,
upper case for inverses, and ``g27`` / ``G27`` for generators past the
alphabet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from . import intmat
from .laurent import LaurentPoly

GENERATOR_LETTERS = "xyzwabcdefghijklmnopqrstuv"
_LETTER_INDEX = {ch: i + 1 for i, ch in enumerate(GENERATOR_LETTERS)}


class NotAutomorphism(ValueError):
    """The proposed images do not define an automorphism of F_n."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.reason = message


@dataclass(frozen=True, order=True)
class Letter:
    generator_index: int
    sign: int = 1

    def __post_init__(self):
        if self.generator_index < 1:
            raise ValueError("generator indices start at 1")
        if self.sign not in (1, -1):
            raise ValueError("letter sign must be +1 or -1")

    def __int__(self) -> int:
        return self.generator_index * self.sign


LetterLike = Union[Letter, int, tuple]


def _signed(item: LetterLike) -> int:
    if isinstance(item, Letter):
        return int(item)
    if isinstance(item, tuple):
        i, s = item
        if s not in (1, -1) or i < 1:
            raise ValueError(f"bad letter {item!r}")
        return i * s
    item = int(item)
    if item == 0:
        raise ValueError("0 is not a letter")
    return item


def letter_name(x: int) -> str:
    i = abs(x)
    name = GENERATOR_LETTERS[i - 1] if i <= len(GENERATOR_LETTERS) else f"g{i}"
    return name if x > 0 else name.upper()


def _sort_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; build through ``reduce`` or ``Word.parse``."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise ValueError("Word letters must be freely reduced; use reduce()")

    @classmethod
    def parse(cls, text: str) -> "Word":
        return reduce(parse_letters(text))

    @classmethod
    def generator(cls, i: int, sign: int = 1) -> "Word":
        return cls((i * sign,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return reduce(base.letters * abs(k))

    def as_letters(self) -> list[Letter]:
        return [Letter(abs(x), 1 if x > 0 else -1) for x in self.letters]

    @property
    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def exponent_sum(self, rank: int) -> list[int]:
        v = [0] * rank
        for x in self.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(_sort_key(x) for x in self.letters))

    def __str__(self) -> str:
        return "".join(letter_name(x) for x in self.letters) or "1"

    def __repr__(self) -> str:
        return f"Word('{self}')"


IDENTITY_WORD = Word()


def reduce(raw: Iterable[LetterLike]) -> Word:
    """Freely reduce a sequence of letters.

    >>> str(reduce([(1, 1), (2, 1), (2, -1), (1, 1)]))
    'xx'
    """
    stack: list[int] = []
    for item in raw:
        x = _signed(item)
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(tuple(stack))


_TOKEN = re.compile(r"([gG])(\d+)|([A-Za-z])|(\s+)|(1)")


def parse_letters(text: str) -> list[int]:
    """Tokenize a word without reducing it. ``1`` and whitespace are ignored."""
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos + 1)
        if m.group(2) is not None:
            i = int(m.group(2))
            if i < 1:
                raise WordSyntaxError("generator numbers start at 1", pos + 1)
            out.append(i if m.group(1) == "g" else -i)
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.lower() not in _LETTER_INDEX:
                raise WordSyntaxError(f"unknown generator letter {ch!r}", pos + 1)
            i = _LETTER_INDEX[ch.lower()]
            out.append(i if ch.islower() else -i)
        pos = m.end()
    return out


def commutator(a: Word, b: Word) -> Word:
    """``a b a^-1 b^-1``."""
    return reduce(a.letters + b.letters + a.inverse().letters + b.inverse().letters)


@dataclass(frozen=True)
class FreeAutomorphism:
    """
    An endomorphism of F_n given by generator images, checked to be invertible
    on homology. ``inverse_images`` is optional; when given it is verified.

    >>> f = FreeAutomorphism.from_strings(["xy", "y"])
    >>> str(f.apply(Word.parse("X")))
    'YX'
    """

    rank: int
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be at least 1")
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.rank:
            raise ValueError(f"expected {self.rank} images, got {len(self.images)}")
        for w in self.images:
            if w.max_generator > self.rank:
                raise ValueError(f"image {w} uses a generator beyond rank {self.rank}")
        if abs(intmat.determinant(self.abelianization)) != 1:
            raise NotAutomorphism("abelianized matrix is not invertible over Z")
        if self.inverse_images is not None:
            inv = tuple(self.inverse_images)
            object.__setattr__(self, "inverse_images", inv)
            if len(inv) != self.rank:
                raise ValueError("wrong number of inverse images")
            other = FreeAutomorphism(self.rank, inv)
            if not (compose(self, other).is_identity() and compose(other, self).is_identity()):
                raise NotAutomorphism("declared inverse does not invert the map")

    @classmethod
    def from_strings(cls, images: Sequence[str], inverse: Sequence[str] | None = None,
                     rank: int | None = None) -> "FreeAutomorphism":
        words = [Word.parse(s) for s in images]
        inv = None if inverse is None else tuple(Word.parse(s) for s in inverse)
        return cls(rank or len(words), tuple(words), inv)

    @classmethod
    def identity(cls, rank: int) -> "FreeAutomorphism":
        gens = tuple(Word.generator(i) for i in range(1, rank + 1))
        return cls(rank, gens, gens)

    def is_identity(self) -> bool:
        return all(w.letters == (i + 1,) for i, w in enumerate(self.images))

    @property
    def certified(self) -> bool:
        """True when the declared inverse was supplied (and verified)."""
        return self.inverse_images is not None

    def apply(self, w: Word | Iterable[LetterLike]) -> Word:
        letters = w.letters if isinstance(w, Word) else [_signed(x) for x in w]
        out: list[int] = []
        inv_cache: dict[int, tuple[int, ...]] = {}
        for x in letters:
            i = abs(x)
            if i > self.rank:
                raise ValueError(f"word uses generator {i} beyond rank {self.rank}")
            if x > 0:
                out.extend(self.images[i - 1].letters)
            else:
                if i not in inv_cache:
                    inv_cache[i] = self.images[i - 1].inverse().letters
                out.extend(inv_cache[i])
        return reduce(out)

    __call__ = apply

    @cached_property
    def abelianization(self) -> np.ndarray:
        """Column j is the exponent-sum vector of the image of generator j."""
        cols = [w.exponent_sum(self.rank) for w in self.images]
        return intmat.as_matrix([[cols[j][i] for j in range(self.rank)] for i in range(self.rank)])

    def inverse(self) -> "FreeAutomorphism":
        """The inverse automorphism; computed by Stallings folding if not declared."""
        inv = self.inverse_images
        if inv is None:
            inv = fold_inverse(self)
        return FreeAutomorphism(self.rank, inv, self.images)

    def with_inverse(self) -> "FreeAutomorphism":
        """Same map with its inverse attached (computed if necessary)."""
        if self.inverse_images is not None:
            return self
        return FreeAutomorphism(self.rank, self.images, fold_inverse(self))

    def __str__(self) -> str:
        return ", ".join(f"{letter_name(i + 1)}->{w}" for i, w in enumerate(self.images))


def apply(aut: FreeAutomorphism, w: Word) -> Word:
    return aut.apply(w)


def compose(outer: FreeAutomorphism, inner: FreeAutomorphism) -> FreeAutomorphism:
    """The map ``w -> outer(inner(w))``."""
    if outer.rank != inner.rank:
        raise ValueError(f"rank mismatch: {outer.rank} vs {inner.rank}")
    images = tuple(outer.apply(w) for w in inner.images)
    if outer.inverse_images is not None and inner.inverse_images is not None:
        # (outer o inner)^-1 = inner^-1 o outer^-1, built from verified inverses
        inner_inv = _trusted(inner.rank, inner.inverse_images, None)
        inv = tuple(inner_inv.apply(w) for w in outer.inverse_images)
        return _trusted(outer.rank, images, inv)
    return FreeAutomorphism(outer.rank, images)


def _trusted(rank: int, images: tuple[Word, ...], inverse: tuple[Word, ...] | None) -> FreeAutomorphism:
    """Build without re-verifying; used when inverses are composed from verified ones."""
    f = FreeAutomorphism.__new__(FreeAutomorphism)
    object.__setattr__(f, "rank", rank)
    object.__setattr__(f, "images", images)
    object.__setattr__(f, "inverse_images", inverse)
    return f


def abelianize(aut: FreeAutomorphism) -> np.ndarray:
    return aut.abelianization


def compose_many(auts: Sequence[FreeAutomorphism], rank: int) -> FreeAutomorphism:
    """Product ``auts[0] o auts[1] o ...``; identity when empty."""
    result = FreeAutomorphism.identity(rank)
    for f in auts:
        result = compose(result, f)
    return result


def evaluate_formal(word: Word, auts: Sequence[FreeAutomorphism], rank: int) -> FreeAutomorphism:
    """Evaluate a word in formal symbols ``s_i -> auts[i-1]`` (inverses included)."""
    factors = []
    for x in word.letters:
        f = auts[abs(x) - 1]
        factors.append(f.with_inverse() if x > 0 else f.with_inverse().inverse())
    return compose_many(factors, rank)


# -- Fox calculus --------------------------------------------------------------


def fox_derivative(w: Word, j: int, rank: int | None = None) -> LaurentPoly:
    """Abelianized Fox derivative with the left rule d(uv) = d(u) + u^ab d(v).

    >>> str(fox_derivative(Word.parse("xy"), 2))
    'X1'
    """
    n = rank if rank is not None else max(w.max_generator, j)
    if not 1 <= j <= n:
        raise ValueError(f"generator {j} out of range for rank {n}")
    prefix = [0] * n
    terms: dict[tuple[int, ...], int] = {}
    for x in w.letters:
        i = abs(x)
        if x > 0:
            if i == j:
                key = tuple(prefix)
                terms[key] = terms.get(key, 0) + 1
            prefix[i - 1] += 1
        else:
            prefix[i - 1] -= 1
            if i == j:
                key = tuple(prefix)
                terms[key] = terms.get(key, 0) - 1
    return LaurentPoly(n, terms)


# -- derived series --------------------------------------------------------------


def derived_series_words(symbols: int, depth: int, budget: int,
                         limit: int | None = None) -> list[Word]:
    """Nontrivial words of the ``depth``-th derived subgroup of F(symbols).

    Depth 0 gives the generators. Depth k forms the commutators of all ordered
    pairs of distinct, non-mutually-inverse words from depth k-1 (and their
    inverses), keeps those of length at most ``budget``, and sorts them by
    length and then lexicographically. ``limit`` truncates every level.
    An empty list means the budget is too small for that depth.
    """
    if depth < 0 or budget < 1 or symbols < 0:
        raise ValueError("need depth >= 0, budget >= 1, symbols >= 0")
    level = [Word.generator(i) for i in range(1, symbols + 1) if budget >= 1]
    if limit is not None:
        level = level[:limit]
    for _ in range(depth):
        seeds = sorted(set(level) | {w.inverse() for w in level}, key=Word.sort_key)
        found = set()
        for a, b in product(seeds, repeat=2):
            if a == b or a == b.inverse():
                continue
            if 2 * (len(a) + len(b)) < 4:
                continue
            c = commutator(a, b)
            if c and len(c) <= budget:
                found.add(c)
        level = sorted(found, key=Word.sort_key)
        if limit is not None:
            level = level[:limit]
        if not level:
            break
    return level


# -- Stallings folding ---------------------------------------------------------


def fold_inverse(aut: FreeAutomorphism) -> tuple[Word, ...]:
    """Inverse images of ``aut`` by folding the rose of its images.

    Every edge of the folding graph carries a target letter and a source label
    (a word in the domain generators) such that reading any closed path at the
    base gives a pair (source, target) with ``aut(source) == target``. Folds
    are preceded by a gauge change at a non-base vertex that makes the two
    source labels agree. If the folded graph is the n-petal rose the labels of
    its petals are the inverse images; otherwise the map is not onto (or two
    edges with equal letters have conflicting labels, so it is not injective).
    """
    n = aut.rank
    base = 0
    # edge id -> [tail, head, letter (positive generator), source label]
    edges: dict[int, list] = {}
    next_vertex = 1
    eid = 0
    for j, img in enumerate(aut.images, start=1):
        if not img:
            raise NotAutomorphism(f"generator {j} maps to the identity")
        path = [base] + [next_vertex + k for k in range(len(img) - 1)] + [base]
        next_vertex += len(img) - 1
        for k, x in enumerate(img.letters):
            label = Word.generator(j) if k == 0 else IDENTITY_WORD
            if x > 0:
                edges[eid] = [path[k], path[k + 1], x, label]
            else:
                edges[eid] = [path[k + 1], path[k], -x, label.inverse()]
            eid += 1

    def darts_at(v):
        out = []
        for e, (t, h, a, lab) in edges.items():
            if t == v:
                out.append((a, e, h, lab))
            if h == v:
                out.append((-a, e, t, lab.inverse()))
        return out

    def gauge(v, c: Word):
        for rec in edges.values():
            t, h = rec[0], rec[1]
            lab = rec[3]
            if h == v:
                lab = lab * c
            if t == v:
                lab = c.inverse() * lab
            rec[3] = lab

    def find_fold():
        vertices = {base} | {r[0] for r in edges.values()} | {r[1] for r in edges.values()}
        for v in sorted(vertices):
            seen = {}
            for d in darts_at(v):
                if d[0] in seen:
                    return v, seen[d[0]], d
                seen[d[0]] = d
        return None

    while True:
        found = find_fold()
        if found is None:
            break
        u, (a, e1, w1, l1), (_, e2, w2, l2) = found
        if w1 == w2:
            if l1 != l2:
                raise NotAutomorphism("images satisfy a nontrivial relation")
        elif w2 != base and w2 != u:
            gauge(w2, l2.inverse() * l1)
        elif w1 != base and w1 != u:
            gauge(w1, l1.inverse() * l2)
        else:
            # one dart is a loop at the non-base vertex u, the other ends at base
            if w1 == u:
                gauge(u, l1.inverse() * l2)
            else:
                gauge(u, l2.inverse() * l1)
        # merge: keep base if it is one of the endpoints
        keep, drop = (w1, w2) if w2 != base else (w2, w1)
        del edges[e2]
        if keep != drop:
            for rec in edges.values():
                if rec[0] == drop:
                    rec[0] = keep
                if rec[1] == drop:
                    rec[1] = keep
        # deduplicate edges that became identical
        seen_edges = {}
        for e in sorted(edges):
            t, h, letter, lab = edges[e]
            key = (t, h, letter)
            if key in seen_edges and edges[seen_edges[key]][3] == lab:
                del edges[e]
            else:
                seen_edges.setdefault(key, e)
        # prune hairs
        while True:
            degree: dict[int, int] = {}
            for t, h, _, _ in edges.values():
                degree[t] = degree.get(t, 0) + 1
                degree[h] = degree.get(h, 0) + 1
            hair = next((e for e, r in edges.items()
                         if (degree[r[0]] == 1 and r[0] != base) or (degree[r[1]] == 1 and r[1] != base)), None)
            if hair is None:
                break
            del edges[hair]

    loops = {r[2]: r[3] for r in edges.values() if r[0] == base and r[1] == base}
    if len(edges) != n or len(loops) != n:
        raise NotAutomorphism("images generate a proper subgroup")
    inv = tuple(loops[i] for i in range(1, n + 1))
    # double check by composition
    candidate = _trusted(n, inv, None)
    if not all(aut.apply(w).letters == (i + 1,) for i, w in enumerate(inv)):
        raise NotAutomorphism("folding produced an inconsistent inverse")
    if not all(candidate.apply(w).letters == (i + 1,) for i, w in enumerate(aut.images)):
        raise NotAutomorphism("folding produced an inconsistent inverse")
    return inv


# -- automorphism files ----------------------------------------------------------


class AutomorphismFileError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


@dataclass
class _Pending:
    name: str
    line: int
    images: dict[int, tuple] = field(default_factory=dict)
    inverse: dict[int, tuple] = field(default_factory=dict)


def parse_automorphisms(text: str, source: str = "<input>") -> list[tuple[str, FreeAutomorphism]]:
    """Parse one or more automorphisms.

    Format: one ``x -> xyX`` line per generator; ``inv x -> ...`` lines give
    the optional declared inverse; ``@name`` starts a new automorphism in a
    file holding several; ``rank N`` fixes the rank, otherwise it is the
    highest generator mentioned in the block (a generator without a line maps
    to itself); ``#`` starts a comment.
    """
    blocks: list[_Pending] = []
    declared_rank: int | None = None
    current: _Pending | None = None

    def fail(msg, line, col):
        raise AutomorphismFileError(msg, line, col, source)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        if stripped.startswith("@"):
            name = stripped[1:].strip()
            if not name:
                fail("empty automorphism name", lineno, indent + 1)
            current = _Pending(name, lineno)
            blocks.append(current)
            continue
        if stripped.startswith("rank"):
            m = re.fullmatch(r"rank\s*:?\s*(\d+)", stripped)
            if not m or int(m.group(1)) < 1:
                fail("expected 'rank N' with N >= 1", lineno, indent + 1)
            declared_rank = int(m.group(1))
            continue
        if "->" not in body:
            fail("expected 'generator -> word'", lineno, indent + 1)
        arrow = body.index("->")
        lhs_col = indent
        is_inverse = re.match(r"inv\s", stripped) is not None
        if is_inverse:
            lhs_col = indent + 3 + (len(body[indent + 3:]) - len(body[indent + 3:].lstrip()))
        lhs = body[lhs_col:arrow]
        try:
            lhs_letters = parse_letters(lhs)
        except WordSyntaxError as exc:
            fail(exc.reason, lineno, lhs_col + exc.column)
        if len(lhs_letters) != 1 or lhs_letters[0] < 0:
            fail("left side must be a single generator", lineno, lhs_col + 1)
        gen = lhs_letters[0]
        rhs_start = arrow + 2
        rhs = body[rhs_start:]
        try:
            letters = parse_letters(rhs)
        except WordSyntaxError as exc:
            fail(exc.reason, lineno, rhs_start + exc.column)
        # locate each letter to report unreduced pairs precisely
        positions = [m.start() for m in _TOKEN.finditer(rhs) if m.group(4) is None and m.group(5) is None]
        for k in range(len(letters) - 1):
            if letters[k] == -letters[k + 1]:
                fail(f"image is not freely reduced ('{letter_name(letters[k])}{letter_name(letters[k + 1])}')",
                     lineno, rhs_start + positions[k] + 1)
        if current is None:
            current = _Pending("aut1", lineno)
            blocks.append(current)
        target = current.inverse if is_inverse else current.images
        if gen in target:
            fail(f"generator {letter_name(gen)} given twice", lineno, lhs_col + 1)
        target[gen] = (Word(tuple(letters)), lineno, rhs_start, tuple(positions))

    out = []
    for block in blocks:
        entries = list(block.images.items()) + list(block.inverse.items())
        used = max([g for g, _ in entries] + [w.max_generator for _, (w, *_r) in entries] + [0])
        rank = declared_rank if declared_rank is not None else used
        if rank < 1:
            fail(f"automorphism '{block.name}' is empty", block.line, 1)
        for gen, (w, lineno, start, positions) in entries:
            if gen > rank:
                fail(f"generator {letter_name(gen)} beyond rank {rank}", lineno, 1)
            for k, x in enumerate(w.letters):
                if abs(x) > rank:
                    fail(f"generator {letter_name(x)} beyond rank {rank}", lineno, start + positions[k] + 1)
        images = tuple(block.images[i][0] if i in block.images else Word.generator(i)
                       for i in range(1, rank + 1))
        inverse = None
        if block.inverse:
            inverse = tuple(block.inverse[i][0] if i in block.inverse else Word.generator(i)
                            for i in range(1, rank + 1))
        try:
            aut = FreeAutomorphism(rank, images, inverse)
        except NotAutomorphism as exc:
            fail(f"'{block.name}': {exc}", block.line, 1)
        out.append((block.name, aut))
    if not out:
        raise AutomorphismFileError("no automorphism found", 1, 1, source)
    return out


def format_automorphism(aut: FreeAutomorphism, name: str | None = None) -> str:
    lines = [f"@{name}"] if name else []
    lines += [f"{letter_name(i + 1)} -> {w}" for i, w in enumerate(aut.images)]
    if aut.inverse_images is not None:
        lines += [f"inv {letter_name(i + 1)} -> {w}" for i, w in enumerate(aut.inverse_images)]
    return "\n".join(lines) + "\n"


def load_automorphisms(path) -> list[tuple[str, FreeAutomorphism]]:
    with open(path, encoding="utf-8") as fh:
        return parse_automorphisms(fh.read(), str(path))

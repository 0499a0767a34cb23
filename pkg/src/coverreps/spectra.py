"""
Spectral tests on integer (and cyclotomic) matrices.

Every verdict is decided in exact arithmetic. Floating point only supplies
approximate roots, whose error bounds are themselves certified exactly, and
the advisory flag basis of ``simultaneous_triangularize``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt
from typing import Sequence

import mpmath
import numpy as np

from . import intmat
from .cyclotomic import Cyclo
from .free_group import Word, derived_series_words
from .upoly import Poly, cyclotomic, euler_phi, gcd, primitive_int, squarefree_part

ALL_ROOTS_OF_UNITY = "AllRootsOfUnity"
OFF_UNIT_CIRCLE = "OffUnitCircle"


# -- characteristic polynomials -----------------------------------------------------------


def _rows(m) -> list[list]:
    arr = np.asarray(m, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return [list(r) for r in arr]


def char_poly(m) -> Poly:
    """``det(tI - m)`` by Berkowitz's division-free algorithm.

    Works over any commutative ring; integer input gives integer coefficients.

    >>> char_poly([[1, 1], [1, 0]])
    Poly('t^2 - t - 1')
    """
    a = _rows(m)
    n = len(a)
    if n == 0:
        return Poly([1])
    c = [1, -a[0][0]]  # high degree first
    for k in range(1, n):
        r = a[k][:k]
        s = [a[i][k] for i in range(k)]
        t = [1, -a[k][k]]
        v = s
        for _ in range(k):
            t.append(-sum((x * y for x, y in zip(r, v)), 0))
            v = [sum((a[i][j] * v[j] for j in range(k)), 0) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = 0
            for j in range(max(0, i - len(t) + 1), min(i, k) + 1):
                acc = acc + t[i - j] * c[j]
            new.append(acc)
        c = new
    return Poly(list(reversed(c)))


def evaluate_at_matrix(p: Poly, m) -> np.ndarray:
    """Horner evaluation of ``p`` at a square matrix (exact)."""
    a = intmat.as_matrix(_rows(m))
    n = a.shape[0]
    acc = intmat.zeros(n, n)
    for coeff in reversed(p.coeffs):
        acc = acc @ a + intmat.identity(n) * coeff
    return acc


# -- Kronecker test ----------------------------------------------------------------------


def cyclotomic_indices(max_degree: int) -> list[int]:
    """All ``k`` with ``phi(k) <= max_degree`` (``phi(k) >= sqrt(k / 2)`` bounds the search)."""
    return [k for k in range(1, 2 * max_degree * max_degree + 3) if euler_phi(k) <= max_degree]


@dataclass
class SpectralReport:
    """Outcome of the Kronecker test with externally checkable data.

    ``radius_bracket`` is ``(lo, hi)`` with ``lo <= spectral radius <= hi``;
    ``root_error`` bounds the distance from each true root (of the squarefree
    part) to its entry in ``approx_roots``.
    """

    char_poly: Poly
    verdict: str
    witness: Poly | None
    cyclotomic_factors: list[tuple[int, int]]
    zero_multiplicity: int
    radius_bracket: tuple[Fraction, Fraction] | None
    approx_roots: list[complex] = field(default_factory=list)
    root_error: Fraction = Fraction(0)

    @property
    def off_circle(self) -> bool:
        return self.verdict == OFF_UNIT_CIRCLE

    @property
    def spectral_radius_lower_bound(self) -> Fraction:
        return self.radius_bracket[0] if self.radius_bracket else Fraction(1)

    def to_dict(self) -> dict:
        def frac(x):
            return f"{x.numerator}/{x.denominator}"

        return {
            "char_poly": [int(c) for c in self.char_poly.coeffs],
            "verdict": self.verdict,
            "witness": [int(c) for c in self.witness.coeffs] if self.witness is not None else None,
            "cyclotomic_factors": [list(x) for x in self.cyclotomic_factors],
            "zero_multiplicity": self.zero_multiplicity,
            "radius_bracket": [frac(x) for x in self.radius_bracket] if self.radius_bracket else None,
            "root_error": frac(self.root_error),
        }


def _split_cyclotomic(p: Poly) -> tuple[list[tuple[int, int]], int, Poly]:
    """Divide out powers of t and every cyclotomic factor; return what is left."""
    zeros = 0
    rest = p
    while rest.degree > 0 and rest.coeffs[0] == 0:
        rest = Poly(rest.coeffs[1:])
        zeros += 1
    factors = []
    for k in cyclotomic_indices(max(rest.degree, 0)):
        phi = cyclotomic(k)
        if phi.degree > rest.degree:
            continue
        mult = 0
        while rest.degree >= phi.degree:
            q, r = divmod(rest, phi)
            if not r.is_zero():
                break
            rest, mult = q, mult + 1
        if mult:
            factors.append((k, mult))
    return factors, zeros, rest


def kronecker_test(m, with_roots: bool = True) -> SpectralReport:
    """Decide whether every eigenvalue of an integer matrix is a root of unity.

    The characteristic polynomial is stripped of powers of ``t`` and of every
    cyclotomic factor of degree at most its degree (exact trial division). A
    nonconstant remainder is a certified witness: a monic integer polynomial
    without cyclotomic factors has a root off the unit circle.
    """
    rows = _rows(m)
    for r in rows:
        for x in r:
            if not isinstance(x, (int, np.integer)) and not (isinstance(x, Fraction) and x.denominator == 1):
                raise ValueError("kronecker_test needs an integer matrix")
    p = char_poly([[int(x) for x in r] for r in rows])
    factors, zeros, rest = _split_cyclotomic(p)
    if zeros == 0 and rest.degree == 0:
        roots = []
        if with_roots:
            for k, _ in factors:
                roots += [complex(Cyclo.root(k, j).to_complex()) for j in range(k) if _coprime(j, k)]
        return SpectralReport(p, ALL_ROOTS_OF_UNITY, None, factors, 0, (Fraction(1), Fraction(1)), roots)
    witness = Poly([0, 1]) ** zeros * rest
    base_radius = Fraction(1) if factors else Fraction(0)
    if rest.degree <= 0:
        return SpectralReport(p, OFF_UNIT_CIRCLE, witness, factors, zeros,
                              (base_radius, base_radius), [0j] if with_roots else [])
    roots, err, bracket = certified_root_bracket(rest)
    if bracket is None:
        # rest has nonzero constant and no cyclotomic factor, so some root lies outside
        bracket = (Fraction(1), _cauchy_bound(rest))
    lo, hi = bracket
    bracket = (max(lo, base_radius), max(hi, base_radius))
    if with_roots and zeros:
        roots = [0j] + roots
    return SpectralReport(p, OFF_UNIT_CIRCLE, witness, factors, zeros, bracket,
                          roots if with_roots else [], err)


def _coprime(a: int, b: int) -> bool:
    from math import gcd as igcd
    return igcd(a, b) == 1


def _cauchy_bound(p: Poly) -> Fraction:
    lead = abs(Fraction(p.lead))
    return 1 + max(abs(Fraction(c)) / lead for c in p.coeffs[:-1])


# -- certified root inclusion -------------------------------------------------------------------


def _mp_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    man = -int(man) if sign else int(man)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def _sqrt_bounds(q: Fraction, bits: int = 256) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(q) <= hi``."""
    if q <= 0:
        return Fraction(0), Fraction(0)
    scale = 1 << bits
    # sqrt(q) = sqrt(num * den) / den
    num, den = q.numerator, q.denominator
    s = isqrt(num * den * scale * scale)
    lo = Fraction(s, den * scale)
    hi = Fraction(s + 1, den * scale)
    return lo, hi


def _gauss_eval(coeffs: Sequence[int], zr: Fraction, zi: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        ar, ai = ar * zr - ai * zi + c, ar * zi + ai * zr
    return ar, ai


def _round_dyadic(x: Fraction, up: bool, bits: int = 96) -> Fraction:
    scaled = x * (1 << bits)
    k = -((-scaled.numerator) // scaled.denominator) if up else scaled.numerator // scaled.denominator
    return Fraction(k, 1 << bits)


def certified_root_bracket(p: Poly, digits: Sequence[int] = (60, 120, 240)
                           ) -> tuple[list[complex], Fraction, tuple[Fraction, Fraction] | None]:
    """Approximate roots of ``p`` with a certified bound on the spectral radius.

    For any ``z`` some root lies within ``deg * |s(z) / s'(z)|`` of ``z`` (``s``
    the squarefree part). When these disks are pairwise disjoint each holds
    exactly one root, which brackets every root modulus. Returns
    ``(roots, radius_of_largest_disk, (lo, hi))`` or a ``None`` bracket when the
    disks could not be separated.
    """
    s = primitive_int(squarefree_part(p))
    n = s.degree
    coeffs = [int(c) for c in s.coeffs]
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    for dps in digits:
        with mpmath.workdps(dps):
            try:
                approx = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=2 * dps)
            except mpmath.libmp.libhyper.NoConvergence:
                continue
            pts = [(_mp_to_fraction(mpmath.re(z)), _mp_to_fraction(mpmath.im(z))) for z in approx]
        radii = []
        ok = True
        for zr, zi in pts:
            fr, fi = _gauss_eval(coeffs, zr, zi)
            dr, di = _gauss_eval(deriv, zr, zi)
            den = dr * dr + di * di
            if den == 0:
                ok = False
                break
            r2 = Fraction(n * n) * (fr * fr + fi * fi) / den
            radii.append(_sqrt_bounds(r2)[1])
        if not ok:
            continue
        for i in range(n):
            for j in range(i + 1, n):
                dx = pts[i][0] - pts[j][0]
                dy = pts[i][1] - pts[j][1]
                if (radii[i] + radii[j]) ** 2 >= dx * dx + dy * dy:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        lo = hi = Fraction(0)
        for (zr, zi), r in zip(pts, radii):
            mlo, mhi = _sqrt_bounds(zr * zr + zi * zi)
            lo = max(lo, mlo - r)
            hi = max(hi, mhi + r)
        roots = [complex(float(zr), float(zi)) for zr, zi in pts]
        # round outward to short dyadics so serialized brackets stay readable
        return roots, _round_dyadic(max(radii, default=Fraction(0)), up=True), \
            (max(_round_dyadic(lo, up=False), Fraction(0)), _round_dyadic(hi, up=True))
    roots = [complex(z) for z in np.roots([float(c) for c in reversed(coeffs)])]
    return roots, Fraction(0), None


# -- eigenvalue ratio degeneracy ----------------------------------------------------------------


def _mat_pow_generic(m: list[list], k: int) -> list[list]:
    n = len(m)
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = m
    while k:
        if k & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        k >>= 1
    return result


def _mat_mul(a: list[list], b: list[list]) -> list[list]:
    n, p = len(a), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = 0
            for k in range(len(b)):
                x = a[i][k]
                if not (x == 0):
                    y = b[k][j]
                    if not (y == 0):
                        acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def repeated_root_degree(p: Poly) -> int:
    """``deg gcd(p, p')``."""
    if p.degree <= 0:
        return 0
    return gcd(p, p.derivative()).degree


def ratio_degeneracy_test(m, bound: int) -> set[int]:
    """The ``k`` in ``2..bound`` where ``deg gcd(p_k, p_k')`` exceeds its value at ``k = 1``.

    ``p_k`` is the characteristic polynomial of ``m^k``. A hit certifies two
    distinct eigenvalues with equal k-th powers.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    a = _rows(m)
    base = repeated_root_degree(char_poly(a))
    hits = set()
    power = a
    for k in range(2, bound + 1):
        power = _mat_mul(power, a)
        if repeated_root_degree(char_poly(power)) > base:
            hits.add(k)
    return hits


# -- index bounds ------------------------------------------------------------------------------------

DEFAULT_BOUND_OVERRIDES = {1: 1}


def jordan_schur_bound(n: int, overrides: dict[int, int] | None = None) -> int:
    """Conservative bound on the index of a normal abelian subgroup of a finite subgroup of GL_n(C).

    ``(n + 1)!`` unless overridden; ``n = 1`` gives 1 by default.
    """
    if n < 1:
        raise ValueError("n must be positive")
    table = DEFAULT_BOUND_OVERRIDES if overrides is None else overrides
    return table.get(n, factorial(n + 1))


# -- simultaneous triangularization ------------------------------------------------------------------


@dataclass
class Flag:
    """Columns of ``basis`` form a flag: every generator is upper triangular in it."""

    basis: np.ndarray

    kind = "Flag"


@dataclass
class TriangularizationFailure:
    """No common eigenvector on a quotient of this dimension."""

    dimension: int

    kind = "Failure"


def _null_space(a: np.ndarray, tol: float) -> np.ndarray:
    if a.shape[1] == 0:
        return a[:, :0]
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def _cluster(values: np.ndarray, tol: float) -> list[complex]:
    out: list[complex] = []
    for v in sorted(values, key=lambda z: (round(z.real, 6), round(z.imag, 6))):
        if not any(abs(v - u) <= tol for u in out):
            out.append(complex(v))
    return out


def _common_eigenvector(mats: list[np.ndarray], tol: float) -> np.ndarray | None:
    d = mats[0].shape[0]

    def search(space: np.ndarray, k: int) -> np.ndarray | None:
        if space.shape[1] == 0:
            return None
        if k == len(mats):
            return space[:, 0]
        a = mats[k]
        proj = space.conj().T @ a @ space
        for mu in _cluster(np.linalg.eigvals(proj), max(tol, 1e-6)):
            sub = _null_space(a @ space - mu * space, tol * 10)
            if sub.shape[1]:
                found = search(space @ sub, k + 1)
                if found is not None:
                    return found
        return None

    return search(np.eye(d, dtype=complex), 0)


def simultaneous_triangularize(gens: Sequence, tol: float = 1e-8) -> Flag | TriangularizationFailure:
    """Find a unitary basis making all generators upper triangular, or report failure.

    ``tol`` is relative to the largest generator norm.
    """
    mats = [np.asarray(_to_complex(g), dtype=complex) for g in gens]
    if not mats:
        return Flag(np.eye(0))
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise ValueError("generators must be square matrices of equal size")
    scale = max(1.0, max(np.linalg.norm(m) for m in mats))
    abs_tol = tol * scale

    def recurse(ms: list[np.ndarray]) -> np.ndarray | int:
        k = ms[0].shape[0]
        if k <= 1:
            return np.eye(k, dtype=complex)
        v = _common_eigenvector(ms, abs_tol)
        if v is None:
            return k
        v = v / np.linalg.norm(v)
        q, _ = np.linalg.qr(np.column_stack([v, np.eye(k, dtype=complex)]))
        q = q[:, :k]
        q[:, 0] = v  # QR may flip the phase of the first column
        rest = recurse([(q.conj().T @ m @ q)[1:, 1:] for m in ms])
        if isinstance(rest, int):
            return rest
        out = q.copy()
        out[:, 1:] = q[:, 1:] @ rest
        return out

    basis = recurse(mats)
    if isinstance(basis, int):
        return TriangularizationFailure(basis)
    for m in mats:
        conj = np.linalg.solve(basis, m @ basis)
        if np.max(np.abs(np.tril(conj, -1)), initial=0.0) >= abs_tol * 10:
            return TriangularizationFailure(d)
    return Flag(basis)


def _to_complex(m) -> list[list[complex]]:
    return [[x.to_complex() if isinstance(x, Cyclo) else complex(x) for x in row] for row in _rows(m)]


# -- exact triangularizability ------------------------------------------------------------------------


def _flatten(m: list[list]) -> list:
    return [x for row in m for x in row]


class _Span:
    """Incremental rational echelon basis of flattened matrices."""

    def __init__(self):
        self.rows: dict[int, list[Fraction]] = {}
        self.members: list[list[list]] = []

    def reduce(self, v: list) -> list[Fraction]:
        v = [Fraction(x) for x in v]
        for piv, row in self.rows.items():
            if v[piv]:
                f = v[piv]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, m: list[list]) -> bool:
        v = self.reduce(_flatten(m))
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        for p2, row in self.rows.items():
            if row[piv]:
                f = row[piv]
                self.rows[p2] = [a - f * b for a, b in zip(row, v)]
        self.rows[piv] = v
        self.members.append(m)
        return True


def triangularizable_exact(gens: Sequence, max_dim: int = 12) -> bool | None:
    """Exact simultaneous triangularizability over C of rational matrices.

    The generated algebra ``A`` is triangularizable iff ``A / rad(A)`` is
    commutative, and ``rad(A) = {x in A : tr(x y) = 0 for all y in A}`` in
    characteristic 0. So it suffices that every generator commutator has zero
    trace against a spanning set of ``A``. Returns ``None`` above ``max_dim``.
    """
    mats = [[[Fraction(x) for x in row] for row in _rows(g)] for g in gens]
    if not mats:
        return True
    d = len(mats[0])
    if d > max_dim:
        return None
    span = _Span()
    ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    span.add(ident)
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for g in mats:
                prod_ = _mat_mul(w, g)
                if span.add(prod_):
                    nxt.append(prod_)
        frontier = nxt
    basis = span.members
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            ab = _mat_mul(mats[i], mats[j])
            ba = _mat_mul(mats[j], mats[i])
            comm = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]
            if not any(x for row in comm for x in row):
                continue
            for y in basis:
                tr = sum(comm[a][b] * y[b][a] for a in range(d) for b in range(d))
                if tr:
                    return False
    return True


# -- solvability probe -----------------------------------------------------------------------------


@dataclass
class SolvableCertificate:
    """The generators are simultaneously triangularizable (checked exactly)."""

    flag: Flag | None
    exact: bool = True

    kind = "SolvableCertificate"

    def to_dict(self) -> dict:
        return {"verdict": self.kind, "exact": self.exact}


@dataclass
class NonsolvableWitness:
    """A derived-series word in powered generators with an eigenvalue off the unit circle."""

    word: Word
    depth: int
    exponents: list[int]
    report: SpectralReport

    kind = "NonsolvableWitness"

    def to_dict(self) -> dict:
        return {"verdict": self.kind, "word": str(self.word), "depth": self.depth,
                "exponents": self.exponents, "report": self.report.to_dict()}


@dataclass
class Inconclusive:
    words_checked: int
    depth_reached: int
    reason: str

    kind = "Inconclusive"

    def to_dict(self) -> dict:
        return {"verdict": self.kind, "words_checked": self.words_checked,
                "depth_reached": self.depth_reached, "reason": self.reason}


def restrict_scalars(m) -> list[list]:
    """Rational matrix of a cyclotomic matrix acting on ``Q(zeta)^d = Q^(d phi)``."""
    rows = _rows(m)
    if not any(isinstance(x, Cyclo) for row in rows for x in row):
        return rows
    from math import lcm
    order = lcm(*(x.order for row in rows for x in row if isinstance(x, Cyclo)))
    deg = euler_phi(order)
    basis = [Cyclo.root(order, k) for k in range(deg)]
    d = len(rows)
    out = [[0] * (d * deg) for _ in range(d * deg)]
    for i in range(d):
        for j in range(d):
            x = Cyclo.coerce(rows[i][j]).lift(order)
            for k, b in enumerate(basis):
                prod_ = (x * b).lift(order)
                for l, c in enumerate(prod_.coeffs):
                    out[i * deg + l][j * deg + k] = c
    return out


def congruence_exponent(m, modulus: int = 3, max_exponent: int = 4096) -> int | None:
    """Smallest ``e >= 1`` with ``m^e = I (mod modulus)``, or ``None`` if it exceeds the cap."""
    a = [[int(x) % modulus for x in row] for row in _rows(m)]
    d = len(a)
    ident = [[int(i == j) for j in range(d)] for i in range(d)]
    cur = a
    for e in range(1, max_exponent + 1):
        if cur == ident:
            return e
        cur = [[sum(cur[i][k] * a[k][j] for k in range(d)) % modulus for j in range(d)] for i in range(d)]
    return None


def solvable_length_bound(dimension: int) -> int:
    """Derived depth at which a connected triangular group becomes unipotent.

    The commutator subgroup of the upper triangular group is unipotent, so one
    step suffices once the group has connected Zariski closure.
    """
    return 1


def solvability_probe(gens: Sequence, depth_max: int = 2, word_budget: int = 16,
                      max_words: int = 2000, tol: float = 1e-8, exact_dim_limit: int = 12,
                      max_exponent: int = 4096, max_entry_bits: int = 4096
                      ) -> SolvableCertificate | NonsolvableWitness | Inconclusive:
    """Probe whether the group generated by ``gens`` is virtually solvable.

    * ``SolvableCertificate``: the generators are simultaneously triangularizable
      (exact test), so the group is solvable.
    * ``NonsolvableWitness``: each generator is first raised to its order modulo 3
      (landing in the torsion-free congruence subgroup, whose subgroups have
      connected Zariski closure); a derived-series word in these powers with an
      eigenvalue off the unit circle cannot exist in a virtually solvable group.
    * ``Inconclusive`` otherwise.
    """
    if depth_max < 1 or word_budget < 1 or max_words < 1:
        raise ValueError("budgets must be positive")
    if not gens:
        return SolvableCertificate(Flag(np.eye(0)))
    mats = [[[Fraction(x) if not isinstance(x, int) else x for x in row] for row in restrict_scalars(g)]
            for g in gens]
    exact = triangularizable_exact(mats, exact_dim_limit)
    if exact:
        flag = simultaneous_triangularize(mats, tol)
        return SolvableCertificate(flag if isinstance(flag, Flag) else None, True)
    integral = all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
                   for m in mats for row in m for x in row)
    if not integral:
        return Inconclusive(0, 0, "generators are not integral")
    ints = [intmat.as_matrix([[int(x) for x in row] for row in m]) for m in mats]
    exponents = []
    for m in ints:
        e = congruence_exponent(m, 3, max_exponent)
        if e is None:
            return Inconclusive(0, 0, "congruence exponent above cap")
        exponents.append(e)
    powered = [intmat.mat_pow(m, e) for m, e in zip(ints, exponents)]
    try:
        inverses = [intmat.int_inverse(m) for m in powered]
    except (ValueError, ZeroDivisionError):
        return Inconclusive(0, 0, "generators are not invertible over Z")
    checked = 0
    reached = 0
    start = solvable_length_bound(len(mats[0]))
    for depth in range(start, depth_max + 1):
        words = derived_series_words(len(powered), depth, word_budget)
        reached = depth
        for w in words:
            if checked >= max_words:
                return Inconclusive(checked, reached, "word budget exhausted")
            checked += 1
            prod_ = intmat.identity(len(mats[0]))
            for x in w.letters:
                prod_ = prod_ @ (powered[x - 1] if x > 0 else inverses[-x - 1])
            if max(abs(int(v)) for v in prod_.flat).bit_length() > max_entry_bits:
                continue
            report = kronecker_test(prod_)
            if report.off_circle:
                return NonsolvableWitness(w, depth, exponents, report)
    return Inconclusive(checked, reached, "no witness within budget")

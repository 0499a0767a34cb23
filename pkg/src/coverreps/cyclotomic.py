"""
Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is a polynomial in ``zeta = exp(2 pi i / N)`` reduced modulo the
N-th cyclotomic polynomial, with rational coefficients. Elements of
different fields are compared and combined by lifting to the field of the
least common multiple.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .upoly import Poly, cyclotomic, euler_phi


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _power_reductions(n: int) -> tuple[tuple, ...]:
    """Coefficient vectors of zeta_n^k for k in [0, n), reduced mod Phi_n."""
    phi = cyclotomic(n)
    out = []
    for k in range(n):
        r = Poly.monomial(k) % phi
        out.append(tuple(r.coeffs) + (0,) * (phi.degree - len(r.coeffs)))
    return tuple(out)


class Cyclo:
    """
    An element of Q(zeta_N).

    >>> z = Cyclo.root(4, 1)
    >>> z * z == -1
    True
    >>> Cyclo.root(6, 2) == Cyclo.root(3, 1)
    True
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        deg = euler_phi(order)
        c = [_norm(Fraction(x)) if not isinstance(x, int) else x for x in coeffs]
        if len(c) > deg:
            c = list((Poly(c) % cyclotomic(order)).coeffs)
        c = c + [0] * (deg - len(c))
        self.order = order
        self.coeffs = tuple(_norm(x) for x in c)

    @classmethod
    def rational(cls, x) -> "Cyclo":
        return cls(1, [x])

    @classmethod
    def root(cls, order: int, k: int = 1) -> "Cyclo":
        """``zeta_order ** k``."""
        return cls(order, _power_reductions(order)[k % order])

    @classmethod
    def from_counts(cls, order: int, counts: Sequence) -> "Cyclo":
        """``sum_k counts[k] * zeta^k`` for ``k`` in ``[0, order)``."""
        reds = _power_reductions(order)
        acc = [0] * euler_phi(order)
        for k, c in enumerate(counts):
            if c:
                for i, r in enumerate(reds[k]):
                    if r:
                        acc[i] += c * r
        return cls(order, acc)

    @classmethod
    def coerce(cls, x) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a cyclotomic number")

    def lift(self, order: int) -> "Cyclo":
        """Re-express in Q(zeta_order); ``order`` must be a multiple of ours."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError("can only lift to a multiple of the current order")
        step = order // self.order
        counts = [0] * order
        for i, c in enumerate(self.coeffs):
            counts[i * step] = c
        return Cyclo.from_counts(order, counts)

    def _common(self, other) -> tuple["Cyclo", "Cyclo"]:
        other = Cyclo.coerce(other)
        if other.order == self.order:
            return self, other
        n = lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction | int:
        if not self.is_rational():
            raise ValueError("cyclotomic number is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # normalized trace is invariant under lifting to a larger field
        t = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                d = self.order // gcd(self.order, k)
                t += c * Fraction(_mobius(d), euler_phi(d))
        return hash(_norm(t)) if self.is_rational() else hash(t)

    def __add__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return Cyclo(self.order, c)
        a, b = self._common(other)
        return Cyclo(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "Cyclo":
        return Cyclo(self.order, [-x for x in self.coeffs])

    def __sub__(self, other) -> "Cyclo":
        return self + (-Cyclo.coerce(other))

    def __rsub__(self, other) -> "Cyclo":
        return Cyclo.coerce(other) - self

    def __mul__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.order, [x * other for x in self.coeffs])
        a, b = self._common(other)
        prod = Poly(a.coeffs) * Poly(b.coeffs)
        return Cyclo(a.order, prod.coeffs)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclo.rational(_norm(Fraction(1) / Fraction(self.coeffs[0])))
        # extended Euclid against the cyclotomic polynomial
        r0, r1 = cyclotomic(self.order), Poly(self.coeffs)
        s0, s1 = Poly(), Poly([1])
        while r1.degree > 0:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r1.is_zero():
            raise ZeroDivisionError("not invertible")
        inv = s1 * (Fraction(1) / Fraction(r1.coeffs[0]))
        return Cyclo(self.order, inv.coeffs)

    def __truediv__(self, other) -> "Cyclo":
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.order, [_norm(Fraction(x) / other) for x in self.coeffs])
        return self * Cyclo.coerce(other).inverse()

    def __rtruediv__(self, other) -> "Cyclo":
        return Cyclo.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Cyclo":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Cyclo.rational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclo":
        counts = [0] * self.order
        for k, c in enumerate(self.coeffs):
            counts[(-k) % self.order] += c
        return Cyclo.from_counts(self.order, counts)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def __complex__(self) -> complex:
        return self.to_complex()

    def __repr__(self) -> str:
        return f"Cyclo({self.order}, {list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mono = "1" if k == 0 else f"z{self.order}" + (f"^{k}" if k > 1 else "")
                terms.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(terms)


def root_of_unity(rotation: Fraction) -> Cyclo:
    """``exp(2 pi i q)`` for a rational rotation number ``q``."""
    q = Fraction(rotation)
    return Cyclo.root(q.denominator, q.numerator % q.denominator)

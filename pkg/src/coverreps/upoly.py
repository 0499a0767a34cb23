"""
Univariate polynomials over an exact field.

Coefficients are stored low degree first. They may be ints, Fractions or
cyclotomic numbers; anything supporting ``+ - * /`` and comparison with 0.
Division converts int coefficients to Fractions.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


def _is_zero(c) -> bool:
    return c == 0


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q = Fraction(a, b)
        return q.numerator if q.denominator == 1 else q
    q = a / b
    if isinstance(q, Fraction) and q.denominator == 1:
        return q.numerator
    return q


class Poly:
    """
    A polynomial in one variable ``t``.

    >>> Poly([-1, -1, 1])
    Poly('t^2 - t - 1')
    >>> Poly([1, 1]) * Poly([-1, 1])
    Poly('t^2 - 1')
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Poly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly([other])
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        return Poly(a + b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [0] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        lead = other.lead
        while len(r) >= len(other.coeffs) and r:
            shift = len(r) - len(other.coeffs)
            f = _div(r[-1], lead)
            q[shift] = f
            for i, b in enumerate(other.coeffs):
                r[shift + i] = r[shift + i] - f * b
            r.pop()
            while r and _is_zero(r[-1]):
                r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.lead
        return Poly(_div(c, lead) for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_power(self, k: int) -> "Poly":
        """``p(t^k)``."""
        out = [0] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return Poly(out)

    def __repr__(self) -> str:
        return f"Poly('{self}')"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if _is_zero(c):
                continue
            mono = "" if i == 0 else "t" if i == 1 else f"t^{i}"
            if isinstance(c, (int, Fraction)):
                neg = c < 0
                mag = -c if neg else c
                coeff = "" if (mag == 1 and mono) else str(mag)
                sign = (" - " if neg else " + ") if parts else ("-" if neg else "")
                parts.append(sign + coeff + mono)
            else:
                parts.append((" + " if parts else "") + f"({c})" + mono)
        return "".join(parts)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over the coefficient field."""
    a, b = a.monic(), b.monic()
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic()
    return p.exact_div(gcd(p, p.derivative())).monic()


def primitive_int(p: Poly) -> Poly:
    """Scale a rational polynomial to a primitive integer polynomial with positive lead."""
    from math import gcd as igcd, lcm

    den = 1
    for c in p.coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = igcd(g, c)
    if g == 0:
        return Poly()
    if ints[-1] < 0:
        g = -g
    return Poly(c // g for c in ints)


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial, with integer coefficients."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    p = Poly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            p = p.exact_div(cyclotomic(d))
    return p


def companion(p: Poly) -> list[list]:
    """Companion matrix of a monic polynomial (characteristic polynomial ``p``)."""
    if not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial")
    n = p.degree
    m = [[0] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = 1
    for i in range(n):
        m[i][n - 1] = -p.coeffs[i]
    return m


def from_int_list(coeffs: Sequence[int]) -> Poly:
    return Poly(int(c) for c in coeffs)

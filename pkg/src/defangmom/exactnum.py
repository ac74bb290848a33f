"""Exact arithmetic in the ring of rational combinations of square roots.

Every coupling coefficient that shows up in the deformed algebras is of the
form ``sum(q_r * sqrt(r))`` with ``q_r`` rational and ``r`` a squarefree
positive integer.  :class:`RadicalNumber` stores exactly that, keyed by
radicand, and keeps it in canonical form so that equality is structural.

Rationals are plain :class:`fractions.Fraction` objects.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "RadicalNumber",
    "Fraction",
    "squarefree_split",
    "sqrt_of_rational",
    "radical_mul",
    "to_float",
    "as_radical",
]

Scalar = Union[int, Fraction, "RadicalNumber"]


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, u)`` with ``n == s*s*u`` and ``u`` squarefree."""
    if n <= 0:
        raise ValueError(f"radicand must be a positive integer, got {n}")
    s, u = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            u *= p
        p += 1 if p == 2 else 2
    return s, u * n


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


class RadicalNumber:
    """An exact number ``sum(q_r * sqrt(r))``.

    The constructor accepts a mapping ``{radicand: coefficient}`` with any
    positive integer radicands; square factors are pulled out and zero
    coefficients dropped, so two equal numbers always compare equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        acc: dict[int, Fraction] = {}
        if terms:
            for r, q in terms.items():
                if not isinstance(r, int) or isinstance(r, bool):
                    raise TypeError(f"radicand must be int, got {type(r).__name__}")
                if isinstance(q, RadicalNumber):
                    raise TypeError("nested radicals are not supported")
                q = Fraction(q)
                if q == 0:
                    continue
                s, u = squarefree_split(r)
                acc[u] = acc.get(u, 0) + q * s
        self._terms = {r: q for r, q in sorted(acc.items()) if q != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> RadicalNumber:
        # terms already canonical (squarefree keys, no zeros)
        obj = cls.__new__(cls)
        obj._terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: Rational) -> RadicalNumber:
        q = Fraction(q)
        return cls._raw({1: q} if q else {})

    @classmethod
    def sqrt(cls, n: Rational) -> RadicalNumber:
        return sqrt_of_rational(n)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {1}

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.rational_part()

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: Scalar) -> RadicalNumber:
        other = as_radical(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for r, q in other._terms.items():
            v = acc.get(r, 0) + q
            if v:
                acc[r] = v
            else:
                acc.pop(r, None)
        return RadicalNumber._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> RadicalNumber:
        return RadicalNumber._raw({r: -q for r, q in self._terms.items()})

    def __pos__(self) -> RadicalNumber:
        return self

    def __sub__(self, other: Scalar) -> RadicalNumber:
        other = as_radical(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> RadicalNumber:
        return (-self) + other

    def __mul__(self, other: Scalar) -> RadicalNumber:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RadicalNumber._raw({})
            return RadicalNumber._raw({r: q * other for r, q in self._terms.items()})
        other = as_radical(other)
        if other is NotImplemented:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for r1, q1 in self._terms.items():
            for r2, q2 in other._terms.items():
                g = math.gcd(r1, r2)
                # sqrt(r1*r2) = g*sqrt(r1*r2/g^2) and r1*r2/g^2 is squarefree
                u = (r1 // g) * (r2 // g)
                acc[u] = acc.get(u, 0) + q1 * q2 * g
        return RadicalNumber._raw({r: q for r, q in acc.items() if q})

    __rmul__ = __mul__

    def conjugate(self, p: int) -> RadicalNumber:
        """Flip the sign of every term whose radicand is divisible by prime ``p``."""
        return RadicalNumber._raw(
            {r: (-q if r % p == 0 else q) for r, q in self._terms.items()}
        )

    def inverse(self) -> RadicalNumber:
        if not self._terms:
            raise ZeroDivisionError("inverse of zero RadicalNumber")
        num = RadicalNumber.rational(1)
        den = self
        while not den.is_rational():
            p = max(p for r in den._terms for p in _prime_factors(r))
            c = den.conjugate(p)
            num = num * c
            den = den * c
        return num * (1 / den.rational_part())

    def __truediv__(self, other: Scalar) -> RadicalNumber:
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = as_radical(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> RadicalNumber:
        return as_radical(other) * self.inverse()

    def __pow__(self, n: int) -> RadicalNumber:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = RadicalNumber.rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / conversion -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RadicalNumber):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({1: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __float__(self) -> float:
        return float(sum(float(q) * math.sqrt(r) for r, q in self._terms.items()))

    def __repr__(self) -> str:
        return f"RadicalNumber({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for r, q in self._terms.items():
            if r == 1:
                parts.append(str(q))
            elif q == 1:
                parts.append(f"sqrt({r})")
            elif q == -1:
                parts.append(f"-sqrt({r})")
            else:
                parts.append(f"{q}*sqrt({r})")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict[str, int]]:
        return [
            {"num": q.numerator, "den": q.denominator, "radicand": r}
            for r, q in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, int]] | str) -> RadicalNumber:
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(t["radicand"]): Fraction(t["num"], t["den"]) for t in data})


def as_radical(x) -> RadicalNumber:
    if isinstance(x, RadicalNumber):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return RadicalNumber.rational(x)
    return NotImplemented


def sqrt_of_rational(q: Rational) -> RadicalNumber:
    """Exact ``sqrt(q)`` for rational ``q >= 0``.

    ``sqrt(a/b)`` is rewritten as ``sqrt(a*b)/b`` and the square part of
    ``a*b`` pulled out, so the result is a single canonical term.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"sqrt_of_rational: negative argument {q}")
    if q == 0:
        return RadicalNumber._raw({})
    s, u = squarefree_split(q.numerator * q.denominator)
    return RadicalNumber._raw({u: Fraction(s, q.denominator)})


def radical_mul(a: RadicalNumber, b: RadicalNumber) -> RadicalNumber:
    return as_radical(a) * as_radical(b)


def to_float(a: Scalar) -> float:
    return float(a)

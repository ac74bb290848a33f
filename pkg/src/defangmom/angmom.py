"""Exact su(2) coupling coefficients.

Clebsch-Gordan coefficients ``<j1 m1, j2 m2 | J M>`` follow Rose's
(Condon-Shortley) phase.  Racah coefficients are returned in unitary form,
``U(abcd;ef) = sqrt((2e+1)(2f+1)) W(abcd;ef)``, with ``W`` related to the
6j symbol by ``W(abcd;ef) = (-1)**(a+b+c+d) {a b e; d c f}``.

Angular momenta may be given as ``int``, :class:`~fractions.Fraction` or a
float that is an exact half-integer.  Internally they are doubled.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import NamedTuple, Union

from .exactnum import RadicalNumber, sqrt_of_rational

__all__ = [
    "AngMom",
    "twice",
    "triangle",
    "clebsch_gordan",
    "racah_w",
    "racah_unitary",
    "wigner_6j",
]

Half = Union[int, Fraction, float]


class AngMom(NamedTuple):
    """Angular momentum stored as ``2j``."""

    twice_j: int

    @classmethod
    def of(cls, j: Half) -> AngMom:
        return cls(twice(j))

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    def projections(self) -> list[Fraction]:
        return [Fraction(tm, 2) for tm in range(self.twice_j, -self.twice_j - 1, -2)]

    def valid_projection(self, m: Half) -> bool:
        tm = twice(m)
        return abs(tm) <= self.twice_j and (self.twice_j - tm) % 2 == 0


def twice(j: Half) -> int:
    """Return ``2j`` as an int, rejecting anything that is not a half-integer."""
    if isinstance(j, AngMom):
        return j.twice_j
    t = 2 * Fraction(j)
    if t.denominator != 1:
        raise ValueError(f"{j!r} is not an integer or half-integer")
    return int(t)


def _tri(ta: int, tb: int, tc: int) -> bool:
    return (
        ta >= 0 and tb >= 0 and tc >= 0
        and abs(ta - tb) <= tc <= ta + tb
        and (ta + tb + tc) % 2 == 0
    )


def triangle(a: Half, b: Half, c: Half) -> bool:
    return _tri(twice(a), twice(b), twice(c))


def clebsch_gordan(j1: Half, m1: Half, j2: Half, m2: Half, J: Half, M: Half) -> RadicalNumber:
    """Exact ``<j1 m1, j2 m2 | J M>``; zero when a selection rule fails."""
    return _cg(twice(j1), twice(m1), twice(j2), twice(m2), twice(J), twice(M))


@lru_cache(maxsize=None)
def _cg(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> RadicalNumber:
    zero = RadicalNumber()
    if tm1 + tm2 != tM or not _tri(tj1, tj2, tJ):
        return zero
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tJ, tM)):
        if abs(tm) > tj or (tj - tm) % 2:
            return zero
    # all of these are integers once the selection rules hold
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tm1) // 2
    c = (tj2 + tm2) // 2
    d = (tJ - tj2 + tm1) // 2
    e = (tJ - tj1 - tm2) // 2
    s = Fraction(0)
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        s += Fraction(
            (-1) ** k,
            factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k)
            * factorial(d + k) * factorial(e + k),
        )
    if s == 0:
        return zero
    pref = Fraction(
        (tJ + 1)
        * factorial((tJ + tj1 - tj2) // 2)
        * factorial((tJ - tj1 + tj2) // 2)
        * factorial(a),
        factorial((tj1 + tj2 + tJ) // 2 + 1),
    )
    pref *= (
        factorial((tJ + tM) // 2) * factorial((tJ - tM) // 2)
        * factorial((tj1 - tm1) // 2) * factorial((tj1 + tm1) // 2)
        * factorial((tj2 - tm2) // 2) * factorial((tj2 + tm2) // 2)
    )
    return sqrt_of_rational(pref) * s


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    return Fraction(
        factorial((ta + tb - tc) // 2) * factorial((ta - tb + tc) // 2)
        * factorial((-ta + tb + tc) // 2),
        factorial((ta + tb + tc) // 2 + 1),
    )


@lru_cache(maxsize=None)
def _sixj(t1: int, t2: int, t3: int, t4: int, t5: int, t6: int) -> RadicalNumber:
    # {j1 j2 j3; j4 j5 j6} via the Racah single sum
    triads = ((t1, t2, t3), (t1, t5, t6), (t4, t2, t6), (t4, t5, t3))
    if not all(_tri(*t) for t in triads):
        return RadicalNumber()
    sums = [sum(t) // 2 for t in triads]
    tops = [(t1 + t2 + t4 + t5) // 2, (t2 + t3 + t5 + t6) // 2, (t3 + t1 + t6 + t4) // 2]
    s = Fraction(0)
    for k in range(max(sums), min(tops) + 1):
        den = 1
        for x in sums:
            den *= factorial(k - x)
        for y in tops:
            den *= factorial(y - k)
        s += Fraction((-1) ** k * factorial(k + 1), den)
    if s == 0:
        return RadicalNumber()
    pref = Fraction(1)
    for t in triads:
        pref *= _delta_sq(*t)
    return sqrt_of_rational(pref) * s


def wigner_6j(j1: Half, j2: Half, j3: Half, j4: Half, j5: Half, j6: Half) -> RadicalNumber:
    return _sixj(twice(j1), twice(j2), twice(j3), twice(j4), twice(j5), twice(j6))


def racah_w(a: Half, b: Half, c: Half, d: Half, e: Half, f: Half) -> RadicalNumber:
    ta, tb, tc, td, te, tf = map(twice, (a, b, c, d, e, f))
    sign = -1 if ((ta + tb + tc + td) // 2) % 2 else 1
    return _sixj(ta, tb, te, td, tc, tf) * sign


def racah_unitary(a: Half, b: Half, c: Half, d: Half, e: Half, f: Half) -> RadicalNumber:
    """Unitary Racah coefficient ``U(abcd;ef)``.

    It is the recoupling overlap ``<(ab)e,d;c | a,(bd)f;c>`` and vanishes
    unless ``(a b e)``, ``(e d c)``, ``(b d f)`` and ``(a f c)`` are all
    triangles.
    """
    w = racah_w(a, b, c, d, e, f)
    if w.is_zero():
        return w
    return w * sqrt_of_rational((twice(e) + 1) * (twice(f) + 1))

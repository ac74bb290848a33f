from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy
from sympy.physics.wigner import clebsch_gordan as sym_cg
from sympy.physics.wigner import racah as sym_racah
from sympy.physics.wigner import wigner_6j as sym_6j

from defangmom.angmom import (
    AngMom,
    clebsch_gordan,
    racah_unitary,
    racah_w,
    triangle,
    twice,
    wigner_6j,
)
from defangmom.exactnum import RadicalNumber

H = Fraction(1, 2)
JS = [Fraction(n, 2) for n in range(0, 5)]  # 0 .. 2 for the sympy cross-check


def _sym(x):
    return sympy.Rational(x.numerator, x.denominator)


def _same(ours: RadicalNumber, ref) -> bool:
    return abs(float(ours) - float(ref)) < 1e-12


def test_basic_values():
    assert clebsch_gordan(H, H, H, -H, 1, 0) == RadicalNumber.sqrt(H)
    assert clebsch_gordan(H, H, H, -H, 0, 0) == RadicalNumber.sqrt(H)
    assert clebsch_gordan(H, -H, H, H, 0, 0) == -RadicalNumber.sqrt(H)
    assert clebsch_gordan(1, 0, 1, 0, 0, 0) == -RadicalNumber.sqrt(Fraction(1, 3))
    assert clebsch_gordan(1, 1, 1, -1, 2, 0) == RadicalNumber.sqrt(Fraction(1, 6))
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == 0


def test_selection_rules_give_zero():
    assert clebsch_gordan(1, 1, 1, 1, 1, 1).is_zero()  # M mismatch
    assert clebsch_gordan(1, 0, 1, 0, 3, 0).is_zero()  # triangle
    assert clebsch_gordan(H, H, 1, 0, 1, H).is_zero()  # integrality


def test_twice_and_triangle():
    assert twice(Fraction(3, 2)) == 3 and twice(2) == 4
    with pytest.raises(ValueError):
        twice(Fraction(1, 3))
    assert triangle(1, 1, 2) and not triangle(1, 1, 3) and not triangle(H, 1, 1)
    assert AngMom.of(Fraction(3, 2)).projections() == [Fraction(k, 2) for k in (3, 1, -1, -3)]


def test_cg_against_sympy():
    for j1, j2 in itertools.product(JS, JS):
        for J in JS:
            if not triangle(j1, j2, J):
                continue
            for m1 in AngMom.of(j1).projections():
                for m2 in AngMom.of(j2).projections():
                    M = m1 + m2
                    if abs(M) > J:
                        continue
                    ref = sym_cg(_sym(j1), _sym(j2), _sym(J), _sym(m1), _sym(m2), _sym(M))
                    assert _same(clebsch_gordan(j1, m1, j2, m2, J, M), ref)


def test_6j_and_w_against_sympy():
    vals = [Fraction(n, 2) for n in range(0, 5)]
    checked = 0
    for a, b, c, d, e, f in itertools.product(vals, repeat=6):
        if not (triangle(a, b, e) and triangle(e, d, c) and triangle(b, d, f) and triangle(a, f, c)):
            continue
        checked += 1
        assert _same(racah_w(a, b, c, d, e, f), sym_racah(*map(_sym, (a, b, c, d, e, f))))
        assert _same(wigner_6j(a, b, e, d, c, f), sym_6j(*map(_sym, (a, b, e, d, c, f))))
        if checked > 400:
            break
    assert checked > 100


def test_racah_unitary_is_recoupling_overlap():
    """U(abcd;ef) equals the overlap of the two coupling schemes built from CG sums."""
    for a, b, d in [(1, 1, 1), (2, 1, 1), (Fraction(3, 2), 1, H), (2, 2, 1)]:
        for c in [Fraction(n, 2) for n in range(0, 9)]:
            for e in [Fraction(n, 2) for n in range(0, 9)]:
                for f in [Fraction(n, 2) for n in range(0, 9)]:
                    if not (triangle(a, b, e) and triangle(e, d, c) and triangle(b, d, f) and triangle(a, f, c)):
                        continue
                    gamma = c
                    tot = RadicalNumber()
                    for al in AngMom.of(a).projections():
                        for be in AngMom.of(b).projections():
                            de = gamma - al - be
                            if abs(de) > d or (d - de).denominator != 1:
                                continue
                            tot += (clebsch_gordan(a, al, b, be, e, al + be)
                                    * clebsch_gordan(e, al + be, d, de, c, gamma)
                                    * clebsch_gordan(b, be, d, de, f, be + de)
                                    * clebsch_gordan(a, al, f, be + de, c, gamma))
                    assert tot == racah_unitary(a, b, c, d, e, f)


@pytest.mark.parametrize("args, expected", [
    ((1, 1, 1, 1, 1, 1), RadicalNumber.rational(Fraction(1, 2))),
    ((1, 1, 0, 1, 1, 1), RadicalNumber.rational(1)),
    ((1, 1, 1, 1, 2, 1), RadicalNumber.sqrt(Fraction(5, 12))),
])
def test_racah_spot_values(args, expected):
    assert racah_unitary(*args) == expected


def test_cg_symmetry_under_exchange():
    for j1, j2, J in itertools.product(JS[:5], JS[:5], JS[:5]):
        if not triangle(j1, j2, J):
            continue
        sign = (-1) ** int(j1 + j2 - J)
        for m1 in AngMom.of(j1).projections():
            for m2 in AngMom.of(j2).projections():
                if abs(m1 + m2) <= J:
                    assert clebsch_gordan(j1, m1, j2, m2, J, m1 + m2) == sign * clebsch_gordan(j2, m2, j1, m1, J, m1 + m2)

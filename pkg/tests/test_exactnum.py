from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defangmom.exactnum import (
    RadicalNumber,
    radical_mul,
    sqrt_of_rational,
    squarefree_split,
    to_float,
)

small_radicand = st.sampled_from([1, 2, 3, 5, 6, 7, 10, 15, 30])
small_frac = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicals = st.dictionaries(small_radicand, small_frac, max_size=4).map(RadicalNumber)
nonzero_rationals = small_frac.filter(lambda q: q != 0)


@pytest.mark.parametrize("n, expected", [(1, (1, 1)), (12, (2, 3)), (72, (6, 2)), (45, (3, 5)), (30, (1, 30))])
def test_squarefree_split(n, expected):
    assert squarefree_split(n) == expected


def test_sqrt_of_rational_examples():
    assert sqrt_of_rational(Fraction(5, 3)) == RadicalNumber({15: Fraction(1, 3)})
    assert sqrt_of_rational(8) == RadicalNumber({2: 2})
    assert sqrt_of_rational(Fraction(9, 4)) == RadicalNumber.rational(Fraction(3, 2))
    assert sqrt_of_rational(0).is_zero()
    with pytest.raises(ValueError):
        sqrt_of_rational(-1)


def test_radical_mul_examples():
    s2, s3, s6 = (RadicalNumber.sqrt(n) for n in (2, 3, 6))
    assert radical_mul(s2, s3) == s6
    assert radical_mul(s6, s6) == 6
    assert radical_mul(s2 + s3, s2 - s3) == -1
    assert radical_mul(RadicalNumber.sqrt(Fraction(5, 3)), RadicalNumber.sqrt(15)) == 5


def test_canonical_form_merges_terms():
    x = RadicalNumber({8: 1, 2: 3, 18: Fraction(1, 3)})
    assert x.terms == {2: Fraction(6)}
    assert RadicalNumber({4: 1}) == 2
    assert RadicalNumber({3: 0}).is_zero()


def test_str_and_float():
    x = RadicalNumber.sqrt(Fraction(5, 3)) * 4
    assert str(x) == "4/3*sqrt(15)"
    assert math.isclose(float(x), 4 * math.sqrt(5 / 3), rel_tol=1e-15)
    assert float(RadicalNumber()) == 0.0 and isinstance(float(RadicalNumber()), float)
    assert to_float(Fraction(1, 4)) == 0.25


@given(radicals, radicals, radicals)
@settings(max_examples=150, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a * 1 == a and a + 0 == a


@given(radicals, radicals)
@settings(max_examples=100, deadline=None)
def test_float_is_a_homomorphism(a, b):
    assert math.isclose(float(a * b), float(a) * float(b), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(a + b), float(a) + float(b), rel_tol=1e-9, abs_tol=1e-9)


@given(radicals)
@settings(max_examples=100, deadline=None)
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1
        assert a / a == 1


@given(radicals)
@settings(max_examples=100, deadline=None)
def test_json_round_trip(a):
    assert RadicalNumber.from_json(a.to_json()) == a
    import json

    assert RadicalNumber.from_json(json.dumps(a.to_json())) == a


@given(nonzero_rationals)
def test_sqrt_squares_back(q):
    r = sqrt_of_rational(abs(q))
    assert r * r == abs(q)
    assert len(r.terms) == 1


@given(radicals)
def test_hash_consistent_with_eq(a):
    b = RadicalNumber(dict(a.terms))
    assert a == b and hash(a) == hash(b)

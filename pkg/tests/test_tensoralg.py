from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from defangmom.exactnum import RadicalNumber
from defangmom.repbuilder import So4, couple, realize
from defangmom.tensoralg import (
    Algebra,
    Core,
    OutsideCatalogError,
    TensorExpr,
    L,
    L2,
    T,
    catalog,
    coupled_commutator,
    coupled_product,
    jacobi_conditions,
    jacobi_residual,
    leibniz_expand,
)
from defangmom.vectordef import DeformationParams

SQ = RadicalNumber.sqrt


def core(kind: str, rank: int, coeff=1, k: int = 0, lam: int = 1) -> TensorExpr:
    return TensorExpr(rank, {(k, Core(kind, rank)): coeff}, lam)


def test_catalog_contents():
    assert [c.label() for c in catalog(1, 1)] == ["L", "T", "[LxT]^1", "[[LxL]^2xT]^1"]
    assert Core.parse("[[LxL]^2xL]^3") == Core("LLL", 3)
    assert Core.parse("[LxT]^1") == Core("LT", 1)


def test_LL_scalar_and_vector():
    assert coupled_product(L(), L(), 0) == L2() * (-SQ(Fraction(1, 3)))
    assert coupled_product(L(), L(), 1) == L() * (-SQ(Fraction(1, 2)))


def test_stretched_LLL_reductions():
    LL = core("LL", 2)
    got = coupled_product(LL, L(), 1)
    assert got.coeff(0, Core("L", 1)) == SQ(Fraction(3, 5)) / 2
    assert got.coeff(1, Core("L", 1)) == -2 / SQ(15)
    assert coupled_product(LL, L(), 2) == LL * (-SQ(Fraction(3, 2)))
    assert coupled_product(LL, L(), 3) == core("LLL", 3)


def test_L_times_LxA():
    got = coupled_product(L(), core("LT", 1), 1)
    want = (core("T", 1, k=1) * Fraction(1, 3)
            + core("LT", 1) * (-1 / (2 * SQ(2)))
            + core("LLT", 1) * (SQ(Fraction(5, 3)) / 2))
    assert got == want


def test_L_times_LLxA():
    got = coupled_product(L(), core("LLT", 1), 1)
    want = (core("LT", 1) * (-3 / (4 * SQ(15)))
            + core("LT", 1, k=1) * (4 / (4 * SQ(15)))
            + core("LLT", 1) * (-3 / (2 * SQ(2))))
    assert got == want


def test_LxA_scalar_recoupling():
    x = coupled_product(core("LT", 1), L(), 0)
    y = coupled_product(L(), core("LT", 1), 0)
    assert x == y == core("LT", 0) * (-1 / SQ(2))


def test_A_L2_bracket():
    got = coupled_commutator(T(), L2(), 1)
    assert got == (T() + core("LT", 1) * SQ(2)) * 2


def test_antisymmetry():
    alg = DeformationParams.of(1, Fraction(1, 3)).algebra()
    for x, y in [(T(), L()), (T(), T()), (core("LT", 1), L()), (T(), L2())]:
        for r in range(abs(x.rank - y.rank), x.rank + y.rank + 1):
            sign = (-1) ** (x.rank + y.rank - r)
            a = coupled_commutator(x, y, r, alg)
            b = coupled_commutator(y, x, r, alg)
            assert a == b * (-sign)


@pytest.mark.parametrize("a", [(1,), (-1, Fraction(1, 7)), (0, 2, Fraction(-1, 3))])
def test_jacobi_mixed_triples_vanish(a):
    alg = DeformationParams.of(*a).algebra()
    for x, y, z in [(L(), L(), L()), (L(), L(), T()), (L(), T(), T()), (T(), T(), T())]:
        for r23 in range(abs(y.rank - z.rank), y.rank + z.rank + 1):
            for r in range(abs(x.rank - r23), x.rank + r23 + 1):
                assert jacobi_residual(x, y, z, r23, r, alg).is_zero()


def test_jacobi_conditions_vector():
    sys1 = jacobi_conditions(1)
    assert len(sys1.independent) == 1
    (c,) = sys1.independent
    assert c.rank == 0 and set(c.coeffs) == {1}


def test_jacobi_conditions_quadrupole():
    sys2 = jacobi_conditions(2)
    by_rank = {c.rank: c for c in sys2.independent}
    assert sorted(by_rank) == [1, 3]
    assert by_rank[1].ratio(1, 3) == SQ(7) / (2 * SQ(2))
    assert by_rank[3].ratio(1, 3) == -2


def test_jacobi_rejects_bad_lambda():
    with pytest.raises(ValueError):
        jacobi_conditions(0)


def test_outside_catalog():
    with pytest.raises(OutsideCatalogError):
        coupled_product(T(), T(), 0)


def test_leibniz_matches_direct():
    alg = DeformationParams.of(1, Fraction(1, 5)).algebra()
    for k in (2, 3):
        direct = coupled_commutator(T(), L2(k), 1, alg)
        assert leibniz_expand(T(), L2(k - 1), L2(), 0, 1, alg) == direct


def test_json_round_trip():
    e = core("LT", 1) * SQ(2) + core("T", 1, k=2) * Fraction(-3, 7)
    assert TensorExpr.from_json(e.to_json()) == e


def test_algebra_requires_bracket_for_TT():
    with pytest.raises(OutsideCatalogError):
        Algebra(1).identify(Algebra(1).product(Algebra(1).T_tensor(), Algebra(1).T_tensor(), 0))


def _num(expr_terms, ops):
    """Evaluate ``sum coeff * L2^k * X`` with ``X`` given as a dict of component matrices."""
    out = None
    for c, k, X in expr_terms:
        term = {m: float(c) * np.linalg.matrix_power(ops["L2"], k) @ X[m] for m in X}
        out = term if out is None else {m: out[m] + term[m] for m in out}
    return out


def test_identities_in_a_matrix_realization():
    """The reductions above hold for explicit so(4) matrices."""
    m = realize(So4(3, 1), DeformationParams.of(1))
    Lm, Am = m.L, m.A
    LA = couple(Lm, 1, Am, 1, 1)
    LL = couple(Lm, 1, Lm, 1, 2)
    LLA = couple(LL, 2, Am, 1, 1)
    ops = {"L2": m.L2}
    lhs = couple(Lm, 1, LA, 1, 1)
    rhs = _num([(Fraction(1, 3), 1, Am), (-1 / (2 * math.sqrt(2)), 0, LA),
                (math.sqrt(5 / 3) / 2, 0, LLA)], ops)
    assert max(np.abs(lhs[q] - rhs[q]).max() for q in lhs) < 1e-10
    lhs = couple(Lm, 1, LLA, 1, 1)
    rhs = _num([(-3 / (4 * math.sqrt(15)), 0, LA), (1 / math.sqrt(15), 1, LA),
                (-3 / (2 * math.sqrt(2)), 0, LLA)], ops)
    assert max(np.abs(lhs[q] - rhs[q]).max() for q in lhs) < 1e-10

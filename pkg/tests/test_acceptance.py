"""Acceptance gate: one PASS/FAIL line per criterion (see the terminal summary)."""
from __future__ import annotations

import itertools
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from defangmom.angmom import AngMom, clebsch_gordan, racah_unitary, triangle
from defangmom.exactnum import RadicalNumber
from defangmom.quaddef import first_order_obstruction, numeric_Q_brackets, reduce_Q_brackets
from defangmom.repbuilder import (
    E3,
    So4,
    So31,
    casimir_eigenvalues,
    realize,
    reduced_matrix_elements,
    verify_realization,
)
from defangmom.tensoralg import jacobi_conditions
from defangmom.vectordef import (
    DeformationParams,
    casimir_linear_forms,
    check_associativity,
    check_c2_casimir,
    compare_printed_casimir,
    solve_casimir,
    solve_recursion,
)

F = Fraction
SQ = RadicalNumber.sqrt
R2, R15, R53 = SQ(2), SQ(15), SQ(F(5, 3))


def cold_seconds(snippet: str) -> float:
    """Run ``snippet`` in a fresh interpreter and return its wall time (no warm caches)."""
    code = (
        "import time, json\n"
        "t0 = time.perf_counter()\n"
        f"{snippet}\n"
        "print(json.dumps(time.perf_counter() - t0))\n"
    )
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


# ---------------------------------------------------------------------------
# 1. recursion table

TABLE = {
    "x": {2: [4, F(20, 3)], 3: [8, F(76, 3), 14], 4: [16, F(224, 3), 88, 24],
          5: [32, F(592, 3), 368, F(680, 3), F(110, 3)]},
    "y": {2: [6 * R2, 4 * R2], 3: [12 * R2, 26 * R2, 6 * R2], 4: [24 * R2, 88 * R2, 68 * R2, 8 * R2],
          5: [48 * R2, 248 * R2, 352 * R2, 140 * R2, 10 * R2]},
    "z": {2: [4 * R53], 3: [8 * R53, 4 * R15], 4: [16 * R53, 16 * R15, 8 * R15],
          5: [32 * R53, 48 * R15, 160 * R53, 40 * R53]},
}


def test_criterion_1_recursion_table(criterion):
    with criterion("criterion 1: recursion table k<=5, all tabulated entries exact, < 1 s"):
        secs = cold_seconds("from defangmom.vectordef import solve_recursion\nsolve_recursion(5)")
        tab = solve_recursion(5)
        entries = [(n, k, i, v) for n, rows in TABLE.items() for k, row in rows.items() for i, v in enumerate(row)]
        wrong = [(n, k, i) for n, k, i, v in entries if getattr(tab, n)(k, i) != v]
        assert not wrong, f"mismatched entries {wrong}"
        assert len(entries) == 38
        assert tab.x(5, 2) == 368 and tab.y(4, 2) == 68 * R2 and tab.z(5, 3) == 40 * R53
        assert secs < 1.0, f"took {secs:.2f} s"


# ---------------------------------------------------------------------------
# 2. associativity


def test_criterion_2_associativity(criterion):
    with criterion("criterion 2: associativity exact for every k <= 6, < 10 s"):
        secs = cold_seconds("from defangmom.vectordef import check_associativity\n"
                            "assert check_associativity(6).ok")
        rep = check_associativity(6)
        assert rep.ok
        assert len(rep.per_k) >= 6
        assert secs < 10.0, f"took {secs:.2f} s"


# ---------------------------------------------------------------------------
# 3. Jacobi reduction


def test_criterion_3_jacobi_reduction(criterion):
    with criterion("criterion 3: one vector condition, two quadrupole conditions with ratios 2sqrt2:sqrt7 and 1:-2"):
        vec = jacobi_conditions(1).independent
        assert len(vec) == 1
        assert vec[0].rank == 0 and list(vec[0].coeffs) == [1]
        quad = {c.rank: c for c in jacobi_conditions(2).independent}
        assert len(quad) == 2 and sorted(quad) == [1, 3]
        c1, c3 = quad[1].coeffs[1], quad[1].coeffs[3]
        assert c1 * SQ(7) == c3 * 2 * R2
        c1, c3 = quad[3].coeffs[1], quad[3].coeffs[3]
        assert c3 == -2 * c1


# ---------------------------------------------------------------------------
# 4. Casimir solver


def test_criterion_4_casimir(criterion):
    with criterion("criterion 4: b1, b4, b5 exact; b2/b3 compared; so(4) [3,1] C1d commutes with A to 1e-10"):
        forms = casimir_linear_forms(4)
        assert forms[0] == [1, 1, 0, 0, 0]
        assert forms[3] == [0, 0, 0, F(1, 4), 2]
        assert forms[4] == [0, 0, 0, 0, F(1, 5)]
        cmp = {row["k"]: row for row in compare_printed_casimir()}
        assert cmp[2]["agree"]
        # b3: the reference form repeats a3; the solver's a2 coefficient is reported and flagged
        assert cmp[3]["suspect_print"] and cmp[3]["computed"] == ["0", "0", "1/3", "5/3", "-16/15"]
        rng = np.random.default_rng(7)
        for a0 in (1, -1, 0):
            a = [F(int(rng.integers(-9, 10)), int(rng.integers(1, 13))) for _ in range(4)]
            a[-1] = a[-1] or F(1, 3)
            rep = solve_casimir(DeformationParams.of(a0, *a))
            assert rep.ok and rep.engine_zero
        m = realize(So4(3, 1), DeformationParams.of(1, F(1, 10)))
        comm = max(np.linalg.norm(m.C1d @ m.A[k] - m.A[k] @ m.C1d) for k in m.A)
        assert comm < 1e-10, comm
        val = np.trace(m.C1d).real / m.C1d.shape[0]
        for l in m.tower.ls:
            sel = np.isclose(m.tower.l_of_state(), float(l))
            block = m.C1d[np.ix_(sel, sel)]
            assert np.linalg.norm(block - val * np.eye(block.shape[0])) < 1e-10
        assert np.linalg.norm(m.C1d - val * np.eye(m.C1d.shape[0])) < 1e-10
        assert abs(val - 28.8) < 1e-10


# ---------------------------------------------------------------------------
# 5. second Casimir


def test_criterion_5_second_casimir(criterion):
    with criterion("criterion 5: [A, L.A]^1 = 0 exactly for arbitrary parameters (basis up to order 6)"):
        assert check_c2_casimir(6).ok
        p = DeformationParams.of(-1, F(2, 7), F(-5, 3), F(1, 11))
        assert check_c2_casimir(1, p).ok


# ---------------------------------------------------------------------------
# 6. quadrupole obstruction

CORRECTED = {
    1: ({"LQ": RadicalNumber.rational(3), "LLQ": SQ(6)}, {"LQ": SQ(35) * F(3, 5), "LLQ": SQ(210) / 5}),
    3: ({"LQ": RadicalNumber.rational(8), "LLQ": RadicalNumber.rational(4)},
        {"LQ": SQ(10) * F(18, 5), "LLQ": SQ(10) * F(9, 5)}),
}


def test_criterion_6_quadrupole_obstruction(criterion):
    with criterion("criterion 6: trivial solution space; Q brackets agree across engine, Leibniz and matrices, < 1 s"):
        secs = cold_seconds("from defangmom.quaddef import first_order_obstruction, reduce_Q_brackets\n"
                            "first_order_obstruction(); reduce_Q_brackets(1); reduce_Q_brackets(3)")
        rep = first_order_obstruction()
        assert rep.solution_space == "trivial" and rep.rank == 2
        assert len(rep.printed_conditions) == 4 and rep.printed_rank == 2
        assert rep.direct_agrees and rep.epsilon_free and rep.mixed_jacobi_zero
        num = numeric_Q_brackets()
        for Lam in (1, 3):
            q = reduce_Q_brackets(Lam)
            assert q.engine == q.leibniz == q.corrected == CORRECTED[Lam]
            for exact, approx in zip(q.engine, num[Lam]):
                assert all(abs(float(exact[c]) - approx[c]) < 1e-10 for c in ("LQ", "LLQ"))
        assert secs < 1.0, f"took {secs:.2f} s"


@pytest.mark.xfail(strict=True, reason="the reference closed form carries a sign slip in one [LxQ] coefficient; "
                                        "see the decisions ledger")
def test_criterion_6_reference_closed_form(criterion):
    with criterion("criterion 6 (sub-check): reduced Q brackets equal the reference closed form as printed"):
        for Lam in (1, 3):
            q = reduce_Q_brackets(Lam)
            assert not q.printed_mismatches(), "; ".join(q.printed_mismatches())


# ---------------------------------------------------------------------------
# 7. representation suite

DEFORMED = [
    (1, F(1, 10)),
    (1, F(1, 20)),
    (1, F(1, 20), F(1, 100)),
    (1, F(1, 10), 0, F(1, 1000)),
    (1, F(-1, 50)),
    (1, 0, 0, 0, F(1, 10000)),
]

TRUNCATED = [
    (So31(1, 2), (-1,)),
    (So31(1, 2), (-1, F(-1, 50))),
    (So31(0, F(1, 2), imaginary=True), (-1, F(-1, 100))),
    (So31(F(1, 2), 1), (-1, F(-1, 50))),
    (So31(2, F(3, 2)), (-1, F(-1, 100), F(1, 10000))),
    (E3(1, 2), (0,)),
    (E3(1, 2), (0, F(-1, 10))),
    (E3(F(1, 2), F(3, 2)), (0, F(-1, 20))),
    (E3(2, 1), (0, F(-1, 20), F(-1, 2000))),
]


def so4_labels():
    out = []
    for tp in range(9):
        p = F(tp, 2)
        q = -p
        while q <= p:
            out.append(So4(p, q))
            q += 1
    return out


def undeformed_reference(label, l):
    """Undeformed reduced matrix elements, written out from the classical formulas."""
    ll1 = float(l * (l + 1))
    if isinstance(label, So4):
        p, q = label.p, label.q
        diag = float(q * (p + 1)) / math.sqrt(ll1) if l else 0.0
        sq = float((l - q) * (l + q) * (p + 1 - l) * (p + 1 + l)) / float(l * (2 * l - 1)) if l != label.l0 else 0.0
        return diag, -math.sqrt(sq)
    l0 = label.l0
    if isinstance(label, So31):
        c = 0 if label.imaginary else label.c
        diag = -float(l0 * c) / math.sqrt(ll1) if l else 0.0
        sq = float((l - l0) * (l + l0) * (label.c_sq + l * l)) / float(l * (2 * l - 1)) if l != l0 else 0.0
        return diag, -math.sqrt(sq)
    diag = -float(l0 * label.eps) / math.sqrt(ll1) if l else 0.0
    sq = float((l - l0) * (l + l0)) / float(l * (2 * l - 1)) if l != l0 else 0.0
    return diag, -abs(float(label.eps)) * math.sqrt(sq)


def undeformed_casimirs(label):
    if isinstance(label, So4):
        return float(label.p * (label.p + 2) + label.q ** 2), float(label.q * (label.p + 1))
    l0 = float(label.l0)
    if isinstance(label, So31):
        c2 = 0.0 if label.imaginary else -l0 * float(label.c)
        return float(label.c_sq) - l0 ** 2 + 1, c2
    return float(label.c_sq), -l0 * float(label.eps)


def test_criterion_7_representations(criterion):
    with criterion("criterion 7: >=20 so(4) labels x >=5 deformed points, residuals < 1e-10, Casimirs to 1e-9, "
                   "undeformed limits to 1e-12, truncated so(3,1)/e(3) interior < 1e-8, < 30 s"):
        t0 = time.perf_counter()
        labels = so4_labels()
        assert len(labels) >= 20
        assert any(l.p.denominator == 2 for l in labels) and any(l.p.denominator == 1 for l in labels)
        worst = 0.0
        worst_cas = 0.0
        # undeformed limit
        for label in labels:
            p = DeformationParams.of(1)
            red = reduced_matrix_elements(label, p)
            for l in red.ls:
                d, dn = undeformed_reference(label, l)
                assert abs(red.diag[l] - d) < 1e-12 and abs(red.down[l] - dn) < 1e-12
            c1, c2 = casimir_eigenvalues(label, p)
            u1, u2 = undeformed_casimirs(label)
            assert abs(c1 - u1) < 1e-12 and abs(c2 - u2) < 1e-12
        # deformed points that pass the unitarity scan on every label
        passing = 0
        for a in DEFORMED:
            p = DeformationParams.of(*a)
            for label in labels:
                rep = verify_realization(realize(label, p), tol=1e-10)
                assert rep.ok, (str(label), a, rep.residuals)
                worst = max(worst, rep.max_residual)
                worst_cas = max(worst_cas, rep.casimir_mismatch)
            passing += 1
        assert passing >= 5
        assert worst_cas < 1e-9, worst_cas
        # truncated towers
        for label, a in TRUNCATED:
            p = DeformationParams.of(*a)
            if len(a) == 1:
                red = reduced_matrix_elements(label, p, cutoff=10)
                for l in red.ls:
                    d, dn = undeformed_reference(label, l)
                    assert abs(red.diag[l] - d) < 1e-12 and abs(red.down[l] - dn) < 1e-12
                c1, c2 = casimir_eigenvalues(label, p)
                u1, u2 = undeformed_casimirs(label)
                assert abs(c1 - u1) < 1e-12 and abs(c2 - u2) < 1e-12
            m = realize(label, p, cutoff=10)
            rep = verify_realization(m, tol=1e-8)
            top = m.reduced.ls[-1]
            assert 9 <= top <= 10 and m.lmax_interior == top - 1
            assert rep.ok, (str(label), a, rep.residuals)
            assert rep.casimir_mismatch < 1e-8
        secs = time.perf_counter() - t0
        print(f"  worst so(4) residual {worst:.2e}, worst Casimir mismatch {worst_cas:.2e}, {secs:.1f} s")
        assert secs < 30.0, f"took {secs:.1f} s"


# ---------------------------------------------------------------------------
# 8. coupling coefficients


def test_criterion_8_coupling_properties(criterion):
    with criterion("criterion 8: exact CG orthogonality and Racah unitarity for all arguments <= 3, < 5 s"):
        t0 = time.perf_counter()
        vals = [F(n, 2) for n in range(7)]
        for j1, j2 in itertools.product(vals, vals):
            Js = [abs(j1 - j2) + i for i in range(int(j1 + j2 - abs(j1 - j2)) + 1)]
            for tM in range(-int(2 * (j1 + j2)), int(2 * (j1 + j2)) + 1, 2):
                M = F(tM, 2)
                pairs = [(m1, M - m1) for m1 in AngMom.of(j1).projections() if abs(M - m1) <= j2]
                Jm = [J for J in Js if abs(M) <= J]
                C = {(pr, J): clebsch_gordan(j1, pr[0], j2, pr[1], J, M) for pr in pairs for J in Jm}
                for J, Jp in itertools.product(Jm, Jm):
                    s = sum((C[pr, J] * C[pr, Jp] for pr in pairs), RadicalNumber())
                    assert s == (1 if J == Jp else 0), (j1, j2, J, Jp, M)
                for pr, qr in itertools.product(pairs, pairs):
                    s = sum((C[pr, J] * C[qr, J] for J in Jm), RadicalNumber())
                    assert s == (1 if pr == qr else 0), (j1, j2, pr, qr)
        wide = [F(n, 2) for n in range(13)]
        for a, b, c, d in itertools.product(vals, repeat=4):
            es = [e for e in wide if triangle(a, b, e) and triangle(e, d, c)]
            fs = [f for f in wide if triangle(b, d, f) and triangle(a, f, c)]
            U = {(e, f): racah_unitary(a, b, c, d, e, f) for e in es for f in fs}
            for f, fp in itertools.product(fs, fs):
                s = sum((U[e, f] * U[e, fp] for e in es), RadicalNumber())
                assert s == (1 if f == fp else 0), (a, b, c, d, f, fp)
        secs = time.perf_counter() - t0
        assert secs < 5.0, f"took {secs:.2f} s"

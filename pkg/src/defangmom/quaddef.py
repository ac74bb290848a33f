"""First-order deformation of su(3) / sl(3,R) / t(5)+so(3): the quadrupole case.

Here ``T = Q`` has rank 2 and the first-order brackets are

    [Q, Q]^1 = 3 sqrt(10) eps L + alpha L^2 L,
    [Q, Q]^3 = beta [[LxL]^2xL]^3.

Feeding these into the two independent (Q, Q, Q) Jacobi conditions leaves
``[Q, L^2 L]^Lam`` and ``[Q, [[LxL]^2xL]^3]^Lam`` for ``Lam = 1, 3``.  Both
reduce to ``[LxQ]^Lam`` and ``[[LxL]^2xQ]^Lam``, which gives four scalar
linear conditions on ``(alpha, beta)``.  Their only solution is zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angmom import racah_unitary
from .exactnum import RadicalNumber, as_radical, sqrt_of_rational
from .tensoralg import (
    Algebra,
    Core,
    TensorExpr,
    _row_reduce,
    coupled_commutator,
    jacobi_conditions,
    jacobi_residual,
    leibniz_expand,
)

__all__ = [
    "QuadParams",
    "QBracketReport",
    "ObstructionReport",
    "reduce_Q_brackets",
    "closed_form_Q_brackets",
    "first_order_obstruction",
    "core_independence",
    "numeric_Q_brackets",
]

LAM = 2
SQ = sqrt_of_rational


def _L2L() -> TensorExpr:
    return TensorExpr(1, {(1, Core("L", 1)): 1}, LAM)


def _LLL() -> TensorExpr:
    return TensorExpr(3, {(0, Core("LLL", 3)): 1}, LAM)


def _Q() -> TensorExpr:
    return TensorExpr(2, {(0, Core("T", 2)): 1}, LAM)


@dataclass(frozen=True)
class QuadParams:
    """First-order parameters ``(eps, alpha, beta)``.

    ``alpha`` and ``beta`` may be rationals or :class:`RadicalNumber`
    (``alpha = 3 sqrt(10) a_1`` is irrational for rational ``a_1``).
    """

    epsilon: int = 1
    alpha: object = 0
    beta: object = 0

    def __post_init__(self):
        if self.epsilon not in (1, -1, 0):
            raise ValueError(f"epsilon must be +1, -1 or 0, got {self.epsilon}")
        for name in ("alpha", "beta"):
            v = as_radical(getattr(self, name))
            if v is NotImplemented:
                raise TypeError(f"{name} must be rational or RadicalNumber")
            object.__setattr__(self, name, v)

    @property
    def algebra_name(self) -> str:
        return {1: "su(3)", -1: "sl(3,R)", 0: "t(5)+so(3)"}[self.epsilon]

    def f1(self) -> TensorExpr:
        return TensorExpr(1, {(0, Core("L", 1)): SQ(90) * self.epsilon,
                              (1, Core("L", 1)): self.alpha}, LAM)

    def f3(self) -> TensorExpr:
        return _LLL() * self.beta

    def algebra(self) -> Algebra:
        return Algebra(LAM, tt={1: self.f1(), 3: self.f3()})


def closed_form_Q_brackets(Lam: int, sign: int = -1) -> tuple[dict, dict]:
    """Closed U-coefficient forms of ``[Q, L^2 L]^Lam`` and ``[Q, [[LxL]^2xL]^3]^Lam``.

    Each is returned as ``{"LQ": c1, "LLQ": c2}`` over ``[LxQ]^Lam`` and
    ``[[LxL]^2xQ]^Lam``.  ``sign`` is the relative sign of the
    ``U(22Lam1;Lam3) U(21Lam1;22)`` term in the ``[LxQ]`` coefficient of
    the second bracket: ``-1`` is the commonly printed form, ``+1`` is
    what the engine and a matrix realization both produce.
    """
    U = racah_unitary
    a = SQ(12) * (SQ(3) - U(1, 1, Lam, 2, 1, 2))
    b = SQ(24) * U(1, 1, Lam, 2, 2, 2)
    c = SQ(3) * (SQ(7) * U(2, 2, Lam, 1, 2, 3)
                 + SQ(2 * Lam * (Lam + 1)) * U(2, 2, Lam, 1, Lam, 3) * U(2, 1, Lam, 1, 2, 2) * (2 * sign))
    d = SQ(18) * SQ(3) * U(2, 1, Lam, 2, 2, 3)
    return {"LQ": a, "LLQ": b}, {"LQ": c, "LLQ": d}


def _split(expr: TensorExpr, Lam: int) -> dict:
    lq, llq = Core("LT", Lam), Core("LLT", Lam)
    extra = [key for key in expr.terms if key not in ((0, lq), (0, llq))]
    if extra:
        raise ValueError(f"unexpected terms {extra} in {expr}")
    return {"LQ": expr.coeff(0, lq), "LLQ": expr.coeff(0, llq)}


@dataclass
class QBracketReport:
    """``[Q, L^2 L]^Lam`` and ``[Q, [[LxL]^2xL]^3]^Lam`` by several routes."""

    Lam: int
    engine: tuple  # (dict, dict) from the normal-ordering engine
    leibniz: tuple  # (dict, dict) from the coupled Leibniz rule
    printed: tuple  # closed forms with the printed sign
    corrected: tuple  # closed forms with the sign the computation supports

    @property
    def routes_agree(self) -> bool:
        return self.engine == self.leibniz == self.corrected

    def printed_mismatches(self) -> list[str]:
        out = []
        for name, mine, theirs in zip(("L2L", "LLL"), self.engine, self.printed):
            for core in ("LQ", "LLQ"):
                if mine[core] != theirs[core]:
                    out.append(f"[Q,{name}]^{self.Lam} {core}: computed {mine[core]}, printed {theirs[core]}")
        return out

    def to_json(self) -> dict:
        def enc(pair):
            return [{k: {"exact": str(v), "float": float(v)} for k, v in d.items()} for d in pair]

        return {
            "Lambda": self.Lam,
            "engine": enc(self.engine),
            "leibniz": enc(self.leibniz),
            "closed_form_printed": enc(self.printed),
            "closed_form_corrected": enc(self.corrected),
            "routes_agree": self.routes_agree,
            "printed_mismatches": self.printed_mismatches(),
        }


def reduce_Q_brackets(Lam: int) -> QBracketReport:
    """Reduce ``[Q, L^2 L]^Lam`` and ``[Q, [[LxL]^2xL]^3]^Lam`` for ``Lam`` in {1, 3}.

    The two brackets are computed in the tensor engine directly and again by
    the coupled Leibniz rule (``L^2 L = [L^2 x L]^1``,
    ``[[LxL]^2xL]^3 = [[LxL]^2 x L]^3``), then set against the closed
    Racah-coefficient forms.
    """
    if Lam not in (1, 3):
        raise ValueError("Lam must be 1 or 3")
    alg = Algebra(LAM)
    Q = _Q()
    eng = (_split(coupled_commutator(Q, _L2L(), Lam, alg), Lam),
           _split(coupled_commutator(Q, _LLL(), Lam, alg), Lam))
    L1 = TensorExpr(1, {(0, Core("L", 1)): 1}, LAM)
    LL = TensorExpr(2, {(0, Core("LL", 2)): 1}, LAM)
    L2 = TensorExpr(0, {(1, Core("1", 0)): 1}, LAM)
    leib = (_split(leibniz_expand(Q, L2, L1, 1, Lam, alg), Lam),
            _split(leibniz_expand(Q, LL, L1, 3, Lam, alg), Lam))
    return QBracketReport(Lam, eng, leib, closed_form_Q_brackets(Lam, -1),
                          closed_form_Q_brackets(Lam, +1))


@dataclass
class ObstructionReport:
    conditions: list  # rows {"Lambda", "core", "alpha", "beta"}
    printed_conditions: list
    rank: int
    printed_rank: int
    rank_per_Lambda: dict
    printed_rank_per_Lambda: dict
    epsilon_free: bool
    direct_agrees: bool
    mixed_jacobi_zero: bool

    @property
    def solution_space(self) -> str:
        return "trivial" if self.rank == 2 else f"dimension {2 - self.rank}"

    @property
    def verdict(self) -> str:
        if self.rank == 2:
            return "non-associative at first order"
        return "first-order deformation admitted"

    def to_json(self) -> dict:
        def enc(rows):
            return [
                {"Lambda": r["Lambda"], "core": r["core"],
                 "alpha": str(r["alpha"]), "beta": str(r["beta"])}
                for r in rows
            ]

        return {
            "conditions": enc(self.conditions),
            "printed_conditions": enc(self.printed_conditions),
            "rank": self.rank,
            "printed_rank": self.printed_rank,
            "rank_per_Lambda": {str(k): v for k, v in self.rank_per_Lambda.items()},
            "printed_rank_per_Lambda": {str(k): v for k, v in self.printed_rank_per_Lambda.items()},
            "solution_space": self.solution_space,
            "epsilon_free": self.epsilon_free,
            "direct_engine_agrees": self.direct_agrees,
            "mixed_jacobi_zero": self.mixed_jacobi_zero,
            "verdict": self.verdict,
        }


def _rank(rows: list[dict]) -> int:
    return len(_row_reduce([{0: r["alpha"], 1: r["beta"]} for r in rows]))


def _printed_rows() -> list[dict]:
    s10, s6 = SQ(10), SQ(6)
    vals = [
        (1, "LQ", s10 * 6, RadicalNumber.rational(-7)),
        (1, "LLQ", s6 * s10 * 2, s6 * 7),
        (3, "LQ", s10 * 2, RadicalNumber.rational(6)),
        (3, "LLQ", s10, RadicalNumber.rational(-9)),
    ]
    return [{"Lambda": L, "core": c, "alpha": a, "beta": b} for L, c, a, b in vals]


def first_order_obstruction() -> ObstructionReport:
    """Assemble and solve the four linear conditions on ``(alpha, beta)``.

    For each outer rank the independent Jacobi condition
    ``c1 [Q,[Q,Q]^1]^Lam + c3 [Q,[Q,Q]^3]^Lam = 0`` is expanded with the
    reduced brackets; the ``eps L`` part drops out because
    ``[Q, L]^Lam`` vanishes for odd ``Lam``.  The same quantities are also
    computed straight from an engine that knows the deformed ``[Q, Q]``
    brackets, and Jacobi identities with at least one ``L`` are checked.
    """
    conds = {c.rank: c for c in jacobi_conditions(LAM).independent}
    rows = []
    per = {}
    direct_ok = True
    alg_a = QuadParams(0, 1, 0).algebra()
    alg_b = QuadParams(0, 0, 1).algebra()
    for Lam in (1, 3):
        c = conds[Lam].coeffs
        rep = reduce_Q_brackets(Lam)
        l2l, lll = rep.engine
        lam_rows = []
        for core in ("LQ", "LLQ"):
            lam_rows.append({"Lambda": Lam, "core": core,
                             "alpha": c[1] * l2l[core], "beta": c[3] * lll[core]})
        rows.extend(lam_rows)
        per[Lam] = _rank(lam_rows)
        # alpha = 1 and beta = 1 one at a time, computed without the reduction
        for alg, key in ((alg_a, "alpha"), (alg_b, "beta")):
            Qt = alg.T_tensor()
            tot = None
            for r12, w in c.items():
                t = alg.bracket(Qt, alg.bracket(Qt, Qt, r12), Lam).scale(w)
                tot = t if tot is None else tot + t
            got = _split(alg.identify(tot), Lam)
            direct_ok &= all(got[r["core"]] == r[key] for r in lam_rows)
    eps_alg = QuadParams(1, 0, 0).algebra()
    Qt = eps_alg.T_tensor()
    eps_free = all(
        eps_alg.identify(eps_alg.bracket(Qt, eps_alg.bracket(Qt, Qt, r12), Lam)).is_zero()
        for Lam in (1, 3) for r12 in (1, 3)
    )
    mixed = _mixed_jacobi_zero(QuadParams(1, SQ(90), Fraction(1, 3)))
    printed = _printed_rows()
    printed_per = {L: _rank([r for r in printed if r["Lambda"] == L]) for L in (1, 3)}
    return ObstructionReport(rows, printed, _rank(rows), _rank(printed), per, printed_per,
                             eps_free, direct_ok, mixed)


def _mixed_jacobi_zero(p: QuadParams) -> bool:
    alg = p.algebra()
    L1 = TensorExpr(1, {(0, Core("L", 1)): 1}, LAM)
    Q = _Q()
    for x, y, z in ((L1, L1, L1), (L1, L1, Q), (L1, Q, Q)):
        for r23 in range(abs(y.rank - z.rank), y.rank + z.rank + 1):
            for r in range(abs(x.rank - r23), x.rank + r23 + 1):
                if not jacobi_residual(x, y, z, r23, r, alg).is_zero():
                    return False
    return True


def core_independence(l_max: int = 6, seed: int = 0) -> dict:
    """Numerical rank of ``{[LxQ]^Lam, [[LxL]^2xQ]^Lam}`` on a truncated tower.

    ``Q`` is realized with random reduced matrix elements on integer ``l``
    from 0 to ``l_max``; the two M=0 components are flattened and their
    singular values returned.  Rank 2 means the cores are independent.
    """
    from .repbuilder import Tower, couple, tensor_matrices

    rng = np.random.default_rng(seed)
    tower = Tower.integer(0, l_max)
    red = {}
    for l in range(l_max + 1):
        for lp in range(max(0, l - 2), min(l_max, l + 2) + 1):
            red[(lp, l)] = rng.normal()
    Lm = tensor_matrices(tower, 1, lambda lp, l: np.sqrt(float(l * (l + 1))) if lp == l else 0.0)
    Qm = tensor_matrices(tower, 2, lambda lp, l: red.get((int(lp), int(l)), 0.0))
    LL = couple(Lm, 1, Lm, 1, 2)
    out = {}
    for Lam in (1, 3):
        a = couple(Lm, 1, Qm, 2, Lam)[0].ravel()
        b = couple(LL, 2, Qm, 2, Lam)[0].ravel()
        sv = np.linalg.svd(np.stack([a, b]), compute_uv=False)
        out[Lam] = {"singular_values": [float(s) for s in sv], "rank": int((sv > 1e-9 * sv[0]).sum())}
    return out


def numeric_Q_brackets(l_max: int = 5, seed: int = 1) -> dict:
    """Least-squares coefficients of both brackets on a random matrix realization.

    An independent float check of :func:`reduce_Q_brackets`: only the
    so(3) covariance of ``Q`` enters, so any reduced matrix elements will do.
    """
    from .repbuilder import Tower, couple, tensor_matrices

    rng = np.random.default_rng(seed)
    tower = Tower.integer(0, l_max)
    red = {}
    for l in range(l_max + 1):
        for lp in range(max(0, l - 2), min(l_max, l + 2) + 1):
            red[(lp, l)] = rng.normal()
    Lm = tensor_matrices(tower, 1, lambda lp, l: np.sqrt(float(l * (l + 1))) if lp == l else 0.0)
    Qm = tensor_matrices(tower, 2, lambda lp, l: red.get((int(lp), int(l)), 0.0))
    LL = couple(Lm, 1, Lm, 1, 2)
    LLL = couple(LL, 2, Lm, 1, 3)
    L2 = {0: sum((-1) ** m * Lm[m] @ Lm[-m] for m in (-1, 0, 1))}
    L2L = couple(L2, 0, Lm, 1, 1)
    out = {}
    for Lam in (1, 3):
        basis = np.stack([couple(Lm, 1, Qm, 2, Lam)[0].ravel(),
                          couple(LL, 2, Qm, 2, Lam)[0].ravel()], 1)
        res = []
        for op, r in ((L2L, 1), (LLL, 3)):
            target = couple(Qm, 2, op, r, Lam, commutator=True)[0].ravel()
            coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
            resid = float(np.abs(basis @ coef - target).max())
            res.append({"LQ": float(coef[0].real), "LLQ": float(coef[1].real), "residual": resid})
        out[Lam] = tuple(res)
    return out

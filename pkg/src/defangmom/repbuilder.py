"""Matrix realizations of (deformed) so(4), so(3,1) and e(3) unirreps.

States are ``|l m>`` on a tower ``l = l0, l0+1, ...``; each so(3) irrep
occurs at most once.  Operators are dense ``complex128`` matrices built by
the Wigner-Eckart rule

    <l' m'| T_mu |l m> = <l m, k mu | l' m'> <l' || T || l>,

with ``<l || L || l> = sqrt(l(l+1))``.  The reduced matrix elements of
``A`` depend on the label and on the deformation through ``G(l^2, l0^2)``;
every radicand is checked exactly before any square root is taken.

Exact arithmetic stops at the reduced-element radicands.  Matrices, spectra
and residuals are float.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .angmom import clebsch_gordan, twice
from .vectordef import CasimirCoeffs, DeformationParams, solve_casimir

__all__ = [
    "NonUnitaryError",
    "So4",
    "So31",
    "E3",
    "parse_label",
    "Tower",
    "MatrixRealization",
    "G_function",
    "G_exact",
    "G_sum",
    "reduced_matrix_elements",
    "undeformed_reduced_elements",
    "realize",
    "verify_realization",
    "casimir_eigenvalues",
    "casimir_series",
    "tensor_matrices",
    "couple",
    "default_tol",
]

Num = Union[int, Fraction, float]


def default_tol(fallback: float = 1e-10) -> float:
    """Tolerance from ``DEFANGMOM_FLOAT_TOL`` if set, else ``fallback``."""
    env = os.environ.get("DEFANGMOM_FLOAT_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise ValueError(f"DEFANGMOM_FLOAT_TOL={env!r} is not a number") from None
    return fallback


class NonUnitaryError(ValueError):
    """A reduced matrix element would need the square root of a negative number."""

    def __init__(self, l, quantity: str, value):
        self.l = l
        self.quantity = quantity
        self.value = value
        super().__init__(f"non-unitary parameters: {quantity} = {value} < 0 at l = {l}")


def _q(x: Num) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _half(x: Num, what: str) -> Fraction:
    v = _q(x)
    if (2 * v).denominator != 1:
        raise ValueError(f"{what} must be an integer or half-integer, got {x}")
    return v


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class So4:
    """so(4) unirrep ``[p, q]`` with ``p >= |q|`` and ``p - |q|`` an integer."""

    p: Fraction
    q: Fraction
    algebra: str = field(default="so4", init=False)

    def __post_init__(self):
        p, q = _half(self.p, "p"), _half(self.q, "q")
        if p < abs(q) or (p - abs(q)).denominator != 1:
            raise ValueError(f"invalid so(4) label [{p}, {q}]")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def l0(self) -> Fraction:
        return abs(self.q)

    def __str__(self) -> str:
        return f"[{self.p},{self.q}]"


@dataclass(frozen=True)
class So31:
    """so(3,1) unirrep ``(l0, c)``; ``c = i nu`` (``imaginary=True``) needs ``l0 = 0``."""

    l0: Fraction
    c: Fraction
    imaginary: bool = False
    algebra: str = field(default="so31", init=False)

    def __post_init__(self):
        l0 = _half(self.l0, "l0")
        if l0 < 0:
            raise ValueError("l0 must be nonnegative")
        if self.imaginary and l0 != 0:
            raise ValueError("imaginary c is only allowed for l0 = 0")
        object.__setattr__(self, "l0", l0)
        object.__setattr__(self, "c", _q(self.c))

    @property
    def c_sq(self) -> Fraction:
        return -self.c ** 2 if self.imaginary else self.c ** 2

    def __str__(self) -> str:
        c = f"{self.c}i" if self.imaginary else f"{self.c}"
        return f"({self.l0},{c})"


@dataclass(frozen=True)
class E3:
    """e(3) unirrep ``(l0, eps)``."""

    l0: Fraction
    eps: Fraction
    algebra: str = field(default="e3", init=False)

    def __post_init__(self):
        l0 = _half(self.l0, "l0")
        if l0 < 0:
            raise ValueError("l0 must be nonnegative")
        object.__setattr__(self, "l0", l0)
        object.__setattr__(self, "eps", _q(self.eps))

    @property
    def c(self) -> Fraction:
        return self.eps

    @property
    def c_sq(self) -> Fraction:
        return self.eps ** 2

    def __str__(self) -> str:
        return f"({self.l0},{self.eps})"


Label = Union[So4, So31, E3]

_A0 = {"so4": 1, "so31": -1, "e3": 0}


def parse_label(algebra: str, text: str) -> Label:
    """Parse ``"p,q"`` / ``"l0,c"`` / ``"l0,eps"``; ``c`` may end in ``i`` or ``j``."""
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"label must have two comma-separated entries, got {text!r}")
    a, b = parts
    if algebra == "so4":
        return So4(Fraction(a), Fraction(b))
    if algebra == "so31":
        if b.endswith(("i", "j")):
            return So31(Fraction(a), Fraction(b[:-1] or "1"), imaginary=True)
        return So31(Fraction(a), Fraction(b))
    if algebra == "e3":
        return E3(Fraction(a), Fraction(b))
    raise ValueError(f"unknown algebra {algebra!r}; expected so4, so31 or e3")


# ---------------------------------------------------------------------------
# G function


@lru_cache(maxsize=None)
def _F_poly(k: int) -> tuple[Fraction, ...]:
    """Coefficients of ``F_k(t)`` with ``F_k((j+1)^2) - F_k(j^2) = (2j+1)(j(j+1))^k``.

    ``F_k`` has degree ``k+1`` and ``F_k(0) = 0``; it is fixed by
    interpolation at ``t = n^2`` through the partial sums.
    """
    n_pts = k + 2
    ts = [Fraction(n * n) for n in range(n_pts)]
    vals = []
    s = Fraction(0)
    for n in range(n_pts):
        vals.append(s)
        s += (2 * n + 1) * Fraction(n * (n + 1)) ** k
    # solve the Vandermonde system exactly
    m = [[t ** e for e in range(n_pts)] + [v] for t, v in zip(ts, vals)]
    for c in range(n_pts):
        piv = next(r for r in range(c, n_pts) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n_pts):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(row[-1] for row in m)


def _G_poly_terms(coeffs, l_sq, l0_sq):
    total = 0
    for k, a in enumerate(coeffs):
        if not a:
            continue
        F = _F_poly(k)
        # (F(t) - F(s)) / (t - s) = sum_e F_e sum_{i<e} t^i s^{e-1-i}
        acc = 0
        for e in range(1, len(F)):
            if F[e]:
                acc += F[e] * sum(l_sq ** i * l0_sq ** (e - 1 - i) for i in range(e))
        total += a * acc
    return total


def G_exact(p: DeformationParams, l_sq: Num, l0_sq: Num) -> Fraction:
    """``G(l^2, l0^2)`` exactly, from the polynomial (divided-difference) form."""
    return Fraction(_G_poly_terms(p.coeffs(), _q(l_sq), _q(l0_sq)))


def G_function(p: DeformationParams, l_sq: float, l0_sq: float) -> float:
    """``G(l^2, l0^2) = sum_{j=l0}^{l-1} (2j+1) g(j(j+1)) / (l^2 - l0^2)`` in closed form.

    The polynomial form is total, so ``l = l0`` (the removable singularity)
    is fine.
    """
    return float(_G_poly_terms([float(a) for a in p.coeffs()], float(l_sq), float(l0_sq)))


def G_sum(p: DeformationParams, l: Num, l0: Num) -> Fraction:
    """Literal sum form of ``G``; needs ``l - l0`` a positive integer."""
    l, l0 = _q(l), _q(l0)
    n = l - l0
    if n.denominator != 1 or n <= 0:
        raise ValueError("sum form needs l - l0 a positive integer")
    coeffs = p.coeffs()
    s = Fraction(0)
    for i in range(int(n)):
        j = l0 + i
        x = j * (j + 1)
        s += (2 * j + 1) * sum(a * x ** k for k, a in enumerate(coeffs))
    return s / (l * l - l0 * l0)


# ---------------------------------------------------------------------------
# reduced matrix elements


@dataclass(frozen=True)
class ReducedElements:
    """Per ``l``: ``diag[l] = <l||A||l>``, ``down[l] = <l-1||A||l>``, ``up[l] = <l+1||A||l>``.

    ``*_sq`` hold the exact squares (with sign in ``diag_sign``) used for the
    unitarity scan.
    """

    ls: tuple
    diag: dict
    down: dict
    up: dict
    down_sq: dict

    def to_json(self) -> dict:
        return {
            str(l): {
                "diag": self.diag[l],
                "down": self.down[l],
                "up": self.up[l],
                "down_sq_exact": str(self.down_sq[l]),
            }
            for l in self.ls
        }


def _tower_ls(label: Label, cutoff: Num | None) -> list[Fraction]:
    if isinstance(label, So4):
        top = label.p
    else:
        if cutoff is None:
            raise ValueError(f"{label.algebra} towers are infinite; pass a cutoff")
        top = _q(cutoff)
        if top < label.l0:
            raise ValueError("cutoff is below l0")
    l0 = label.l0
    return [l0 + i for i in range(int(top - l0) + 1)]


def reduced_matrix_elements(label: Label, p: DeformationParams, cutoff: Num | None = None) -> ReducedElements:
    """Reduced matrix elements of ``A`` on the tower of ``label``.

    Raises :class:`NonUnitaryError` at the first ``l`` whose radicand is
    negative.  ``<l+1||A||l>`` comes from ``<l||A||l+1>`` via
    ``<l+1||A||l> = -sqrt((2l+1)/(2l+3)) <l||A||l+1>``.
    """
    if _A0[label.algebra] != p.a0:
        raise ValueError(
            f"label {label} belongs to {label.algebra} but params have a0 = {p.a0}"
        )
    ls = _tower_ls(label, cutoff)
    l0 = label.l0
    diag, down, down_sq = {}, {}, {}
    if isinstance(label, So4):
        P = (label.p + 1) ** 2
        GP = G_exact(p, P, l0 * l0)
        if label.q and GP < 0:
            raise NonUnitaryError(ls[0], "G((p+1)^2, q^2)", GP)
    for l in ls:
        ll1 = l * (l + 1)
        if l == 0:
            diag[l] = 0.0
        elif isinstance(label, So4):
            diag[l] = float(label.q * (label.p + 1)) * math.sqrt(float(GP / ll1))
        else:
            diag[l] = -float(l0 * label.c) / math.sqrt(float(ll1)) if not getattr(label, "imaginary", False) else 0.0
        if l == l0:
            down_sq[l] = Fraction(0)
        else:
            Gl = G_exact(p, l * l, l0 * l0)
            if isinstance(label, So4):
                inner = P * GP - l * l * Gl
            else:
                inner = label.c_sq - l * l * Gl
            down_sq[l] = (l - l0) * (l + l0) * inner / (l * (2 * l - 1))
        if down_sq[l] < 0:
            raise NonUnitaryError(l, "<l-1||A||l>^2", down_sq[l])
        down[l] = -math.sqrt(float(down_sq[l])) if down_sq[l] else 0.0
    up = {}
    for l in ls:
        nxt = l + 1
        if nxt in down:
            up[l] = -math.sqrt(float((2 * l + 1) / (2 * l + 3))) * down[nxt]
        elif isinstance(label, So4):
            up[l] = 0.0
        else:
            # beyond the cutoff; the element exists but is not realized
            up[l] = float("nan")
    return ReducedElements(tuple(ls), diag, down, up, down_sq)


def undeformed_reduced_elements(label: Label, cutoff: Num | None = None) -> ReducedElements:
    """Undeformed closed forms, written out directly without ``G``."""
    ls = _tower_ls(label, cutoff)
    l0 = label.l0
    diag, down, down_sq = {}, {}, {}
    for l in ls:
        if isinstance(label, So4):
            p, q = label.p, label.q
            diag[l] = 0.0 if l == 0 else float(q * (p + 1)) / math.sqrt(float(l * (l + 1)))
            sq = (l - q) * (l + q) * (p + 1 - l) * (p + 1 + l) / (l * (2 * l - 1)) if l != l0 else Fraction(0)
            down[l] = -math.sqrt(float(sq)) if sq else 0.0
        elif isinstance(label, So31):
            c = 0 if label.imaginary else label.c
            diag[l] = 0.0 if l == 0 else -float(l0 * c) / math.sqrt(float(l * (l + 1)))
            sq = (l - l0) * (l + l0) * (label.c_sq + l * l) / (l * (2 * l - 1)) if l != l0 else Fraction(0)
            down[l] = -math.sqrt(float(sq)) if sq else 0.0
        else:
            diag[l] = 0.0 if l == 0 else -float(l0 * label.eps) / math.sqrt(float(l * (l + 1)))
            sq = (l - l0) * (l + l0) / (l * (2 * l - 1)) if l != l0 else Fraction(0)
            down[l] = -abs(float(label.eps)) * math.sqrt(float(sq)) if sq and label.eps else 0.0
            sq = sq * label.eps ** 2
        down_sq[l] = sq
    up = {}
    for l in ls:
        if l + 1 in down:
            up[l] = -math.sqrt(float((2 * l + 1) / (2 * l + 3))) * down[l + 1]
        else:
            up[l] = 0.0 if isinstance(label, So4) else float("nan")
    return ReducedElements(tuple(ls), diag, down, up, down_sq)


# ---------------------------------------------------------------------------
# towers and matrices


@lru_cache(maxsize=None)
def _cgf(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> float:
    return float(clebsch_gordan(Fraction(tj1, 2), Fraction(tm1, 2), Fraction(tj2, 2),
                                Fraction(tm2, 2), Fraction(tJ, 2), Fraction(tM, 2)))


@dataclass(frozen=True)
class Tower:
    """Direct sum of so(3) irreps ``l`` in ``ls``; states ``(2l, 2m)`` in order."""

    ls: tuple

    def __post_init__(self):
        object.__setattr__(self, "ls", tuple(Fraction(l) for l in self.ls))

    @classmethod
    def integer(cls, lo: int, hi: int) -> Tower:
        return cls(tuple(range(lo, hi + 1)))

    @property
    def states(self) -> list[tuple[int, int]]:
        out = []
        for l in self.ls:
            tl = twice(l)
            out.extend((tl, tm) for tm in range(tl, -tl - 1, -2))
        return out

    @property
    def dim(self) -> int:
        return sum(twice(l) + 1 for l in self.ls)

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def mask(self, lmax: Fraction | None = None) -> np.ndarray:
        """Boolean mask of states with ``l <= lmax`` (all states if ``None``)."""
        if lmax is None:
            return np.ones(self.dim, dtype=bool)
        tl = twice(lmax)
        return np.array([s[0] <= tl for s in self.states])

    def l_of_state(self) -> np.ndarray:
        return np.array([s[0] / 2 for s in self.states])


def tensor_matrices(tower: Tower, rank: int, reduced: Callable) -> dict:
    """Components ``{mu: matrix}`` of a rank-``rank`` tensor on ``tower``.

    ``reduced(lp, l)`` returns ``<lp || T || l>`` (0 when absent).
    """
    idx = tower.index()
    D = tower.dim
    ops = {}
    for mu in range(-rank, rank + 1):
        M = np.zeros((D, D), dtype=complex)
        for (tl, tm), i in idx.items():
            for lp in tower.ls:
                tlp = twice(lp)
                tmp = tm + 2 * mu
                if abs(tmp) > tlp or abs(tlp - tl) > 2 * rank:
                    continue
                r = reduced(lp, Fraction(tl, 2))
                if not r:
                    continue
                c = _cgf(tl, tm, 2 * rank, 2 * mu, tlp, tmp)
                if c:
                    M[idx[(tlp, tmp)], i] += c * r
        ops[mu] = M
    return ops


def couple(x: dict, rx: int, y: dict, ry: int, R: int, commutator: bool = False) -> dict:
    """``[x × y]^R`` (or ``[x, y]^R``) of component dicts, all components."""
    out = {}
    for M in range(-R, R + 1):
        acc = None
        for m1 in range(-rx, rx + 1):
            m2 = M - m1
            if abs(m2) > ry:
                continue
            c = _cgf(2 * rx, 2 * m1, 2 * ry, 2 * m2, 2 * R, 2 * M)
            if not c:
                continue
            term = x[m1] @ y[m2]
            if commutator:
                term = term - y[m2] @ x[m1]
            acc = c * term if acc is None else acc + c * term
        if acc is None:
            n = next(iter(x.values())).shape[0]
            acc = np.zeros((n, n), dtype=complex)
        out[M] = acc
    return out


@dataclass
class MatrixRealization:
    label: Label
    params: DeformationParams
    tower: Tower
    L: dict
    A: dict
    L2: np.ndarray
    A2: np.ndarray
    C1d: np.ndarray
    C2d: np.ndarray
    casimir: CasimirCoeffs
    reduced: ReducedElements
    lmax_interior: Fraction | None  # None for exact (finite) towers

    @property
    def truncated(self) -> bool:
        return self.lmax_interior is not None


def realize(label: Label, p: DeformationParams, cutoff: Num | None = None) -> MatrixRealization:
    """Build ``L_m``, ``A_mu``, ``C_1d`` and ``C_2d`` on the tower of ``label``.

    ``C_2d = sum_m (-1)^m L_m A_{-m}`` and ``C_1d = h(L^2) + A^2`` with
    ``A^2 = sum_mu (-1)^mu A_mu A_{-mu}`` and ``h`` from
    :func:`defangmom.vectordef.solve_casimir`.
    """
    red = reduced_matrix_elements(label, p, cutoff)
    tower = Tower(red.ls)

    def a_red(lp, l):
        if lp == l:
            return red.diag[l]
        if lp == l - 1:
            return red.down[l]
        if lp == l + 1 and lp in red.down:
            return red.up[l]
        return 0.0

    Lm = tensor_matrices(tower, 1, lambda lp, l: math.sqrt(float(l * (l + 1))) if lp == l else 0.0)
    Am = tensor_matrices(tower, 1, a_red)
    L2 = sum((-1) ** m * Lm[m] @ Lm[-m] for m in (-1, 0, 1))
    A2 = sum((-1) ** m * Am[m] @ Am[-m] for m in (-1, 0, 1))
    C2 = sum((-1) ** m * Lm[m] @ Am[-m] for m in (-1, 0, 1))
    cas = solve_casimir(p, engine_check=False).coeffs
    lvals = tower.l_of_state()
    h = np.diag([cas.h(l * (l + 1)) for l in lvals]).astype(complex)
    interior = None if isinstance(label, So4) else red.ls[-1] - 1
    return MatrixRealization(label, p, tower, Lm, Am, L2, A2, h + A2, C2, cas, red, interior)


def _g_of(p: DeformationParams, L2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(L2)
    power = np.eye(L2.shape[0], dtype=complex)
    for c in p.coeffs():
        out = out + float(c) * power
        power = power @ L2
    return out


@dataclass
class ResidualReport:
    residuals: dict
    casimir_spectrum: dict
    casimir_closed_form: dict
    tol: float
    interior_lmax: Fraction | None

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def casimir_mismatch(self) -> float:
        return max(abs(self.casimir_spectrum[k] - self.casimir_closed_form[k]) for k in ("C1d", "C2d"))

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol

    def to_json(self) -> dict:
        return {
            "residuals": self.residuals,
            "max_residual": self.max_residual,
            "tolerance": self.tol,
            "interior_lmax": None if self.interior_lmax is None else str(self.interior_lmax),
            "casimir_spectrum": self.casimir_spectrum,
            "casimir_closed_form": self.casimir_closed_form,
            "casimir_mismatch": self.casimir_mismatch,
            "ok": self.ok,
        }


def verify_realization(m: MatrixRealization, p: DeformationParams | None = None,
                       tol: float | None = None) -> ResidualReport:
    """Frobenius residuals of the defining relations and of the Casimirs.

    On truncated towers every residual is restricted to the states with
    ``l <= L_max - 1``; the top block cannot satisfy the relations.
    """
    p = p or m.params
    tol = default_tol() if tol is None else tol
    mask = m.tower.mask(m.lmax_interior)
    sub = np.ix_(mask, mask)

    def nrm(x):
        return float(np.linalg.norm(x[sub]))

    L, A = m.L, m.A
    res = {}
    LL = couple(L, 1, L, 1, 1, commutator=True)
    res["[L,L]^1 + sqrt2 L"] = max(nrm(LL[k] + math.sqrt(2) * L[k]) for k in L)
    la = 0.0
    for R in (0, 1, 2):
        br = couple(L, 1, A, 1, R, commutator=True)
        for k in br:
            la = max(la, nrm(br[k] + (math.sqrt(2) * A[k] if R == 1 else 0)))
    res["[L,A] + sqrt2 A"] = la
    g = _g_of(p, m.L2)
    AA = couple(A, 1, A, 1, 1, commutator=True)
    res["[A,A]^1 + sqrt2 g(L^2) L"] = max(nrm(AA[k] + math.sqrt(2) * g @ L[k]) for k in L)
    for name, C in (("C1d", m.C1d), ("C2d", m.C2d)):
        res[f"[{name}, A]"] = max(nrm(C @ A[k] - A[k] @ C) for k in A)
        res[f"[{name}, L]"] = max(nrm(C @ L[k] - L[k] @ C) for k in L)
    herm = 0.0
    for ops in (L, A):
        for k in ops:
            herm = max(herm, nrm(ops[k].conj().T - (-1) ** k * ops[-k]))
    res["hermiticity"] = herm
    spectrum = {}
    for name, C in (("C1d", m.C1d), ("C2d", m.C2d)):
        block = C[sub]
        val = np.trace(block).real / block.shape[0]
        spectrum[name] = float(val)
        res[f"{name} off-scalar"] = float(np.linalg.norm(block - val * np.eye(block.shape[0])))
    closed = casimir_eigenvalues(m.label, p)
    return ResidualReport(res, spectrum, {"C1d": closed[0], "C2d": closed[1]}, tol, m.lmax_interior)


def casimir_eigenvalues(label: Label, p: DeformationParams) -> tuple[float, float]:
    """Closed-form ``(<C_1d>, <C_2d>)`` for a deformed unirrep."""
    cas = solve_casimir(p, engine_check=False).coeffs
    l0 = label.l0
    base = cas.h(float(l0 * (l0 + 1))) - float((l0 + 1) * G_exact(p, (l0 + 1) ** 2, l0 * l0))
    if isinstance(label, So4):
        GP = G_exact(p, (label.p + 1) ** 2, label.q ** 2)
        if label.q and GP < 0:
            raise NonUnitaryError(l0, "G((p+1)^2, q^2)", GP)
        c1 = base + float((label.p + 1) ** 2 * GP)
        c2 = float(label.q * (label.p + 1)) * math.sqrt(float(GP)) if label.q else 0.0
        return c1, c2
    c1 = base + float(label.c_sq)
    c2 = 0.0 if getattr(label, "imaginary", False) else -float(l0 * label.c)
    return c1, c2


def casimir_series(label: Label, p: DeformationParams) -> tuple[float, float]:
    """Expansion of the Casimir eigenvalues through the ``a_2`` terms.

    Only ``a_0, a_1, a_2`` enter; for parameters of order ``K <= 2`` the
    truncation is exact and must agree with :func:`casimir_eigenvalues`.
    """
    a1, a2 = float(p.coeff(1)), float(p.coeff(2))
    if isinstance(label, So4):
        C1 = float(label.p * (label.p + 2) + label.q ** 2)
        C2 = float(label.q * (label.p + 1))
        c1 = C1 + 0.5 * a1 * (C1 * (C1 + 1) - C2 ** 2) + a2 / 3 * C1 * (C1 * (C1 + 1) - 2 * C2 ** 2)
        c2 = C2 * math.sqrt(1 + 0.5 * a1 * C1 + a2 / 3 * (C1 ** 2 - C2 ** 2))
        return c1, c2
    l0 = float(label.l0)
    C1 = float(label.c_sq) - l0 ** 2 + 1 if isinstance(label, So31) else float(label.c_sq)
    c2 = 0.0 if getattr(label, "imaginary", False) else -l0 * float(label.c)
    c1 = C1 + 0.5 * a1 * l0 ** 2 * (l0 ** 2 - 1) + a2 / 3 * l0 ** 2 * (l0 ** 2 - 1) ** 2
    return c1, c2

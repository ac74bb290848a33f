"""Irreducible tensor operators built from ``L`` and one tensor ``T`` of rank lam.

Two layers live here.

:class:`Algebra` is a concrete engine.  It works with spherical components
``L_{+1}, L_0, L_{-1}, T_lam, ..., T_{-lam}`` and keeps every operator
polynomial normal ordered (L's before T's, each group sorted by component
index) using the defining commutators::

    [L, L]^1 = -sqrt(2) L,   [L, T]^Lam = -sqrt(lam(lam+1)) delta_{Lam,lam} T,
    [T, T]^Lam = f^Lam(L)     (optional; only needed when T's must be reordered)

:class:`TensorExpr` is the canonical form users see: a combination of
``L^{2k} * core`` where ``core`` comes from a small fixed catalog
(``1, L, [LxL]^2, [[LxL]^2xL]^3, T, [LxT]^Lam, [[LxL]^2xT]^Lam``).  Results
computed by the engine are identified back into the catalog by exact linear
elimination; anything that does not fit raises :class:`OutsideCatalogError`.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .angmom import clebsch_gordan, racah_unitary, triangle
from .exactnum import RadicalNumber, as_radical, sqrt_of_rational

__all__ = [
    "OutsideCatalogError",
    "Core",
    "TensorExpr",
    "Tensor",
    "Algebra",
    "catalog",
    "coupled_product",
    "coupled_commutator",
    "leibniz_expand",
    "jacobi_residual",
    "jacobi_conditions",
    "JacobiCondition",
    "L",
    "T",
    "L2",
]

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

F0 = Fraction(0)
F1 = Fraction(1)

# A polynomial is a dict {(monomial, radicand): Fraction}; the monomial is a
# nondecreasing tuple of generator indices and the radicand is squarefree.
Poly = dict


class OutsideCatalogError(ValueError):
    """The normal form of a result cannot be written over the core catalog."""


def _padd(acc: Poly, p: Poly, scale: Fraction = F1) -> None:
    for key, q in p.items():
        v = acc.get(key, F0) + q * scale
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)


def _pscale(p: Poly, c: RadicalNumber) -> Poly:
    out: Poly = {}
    for r2, q2 in c.terms.items():
        for (m, r), q in p.items():
            g = math.gcd(r, r2)
            key = (m, (r // g) * (r2 // g))
            v = out.get(key, F0) + q * q2 * g
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _pneg(p: Poly) -> Poly:
    return {k: -q for k, q in p.items()}


def _coeff_at(p: Poly) -> dict:
    """Group a polynomial by monomial: {monomial: RadicalNumber}."""
    grouped: dict = {}
    for (m, r), q in p.items():
        grouped.setdefault(m, {})[r] = q
    return {m: RadicalNumber._raw(t) for m, t in grouped.items()}


# ---------------------------------------------------------------------------
# catalog

_KINDS = ("1", "L", "LL", "LLL", "T", "LT", "LLT")
_LDEG = {"1": 0, "L": 1, "LL": 2, "LLL": 3, "T": 0, "LT": 1, "LLT": 2}


@dataclass(frozen=True, order=True)
class Core:
    """One entry of the core catalog.

    ``kind`` is one of ``1`` (identity), ``L``, ``LL`` (``[LxL]^2``),
    ``LLL`` (``[[LxL]^2xL]^3``), ``T``, ``LT`` (``[LxT]^rank``) and ``LLT``
    (``[[LxL]^2xT]^rank``).
    """

    kind: str
    rank: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown core kind {self.kind!r}")
        fixed = {"1": 0, "L": 1, "LL": 2, "LLL": 3}
        if self.kind in fixed and self.rank != fixed[self.kind]:
            raise ValueError(f"core {self.kind} has rank {fixed[self.kind]}")

    @property
    def tdeg(self) -> int:
        return 1 if "T" in self.kind else 0

    @property
    def ldeg(self) -> int:
        return _LDEG[self.kind]

    def label(self, tname: str = "T") -> str:
        return {
            "1": "1",
            "L": "L",
            "LL": "[LxL]^2",
            "LLL": "[[LxL]^2xL]^3",
            "T": tname,
            "LT": f"[Lx{tname}]^{self.rank}",
            "LLT": f"[[LxL]^2x{tname}]^{self.rank}",
        }[self.kind]

    @classmethod
    def parse(cls, text: str, lam: int = 1) -> Core:
        t = text.replace(" ", "").replace("A", "T").replace("Q", "T")
        simple = {"1": ("1", 0), "L": ("L", 1), "[LxL]^2": ("LL", 2),
                  "[[LxL]^2xL]^3": ("LLL", 3), "T": ("T", lam)}
        if t in simple:
            return cls(*simple[t])
        for prefix, kind in (("[[LxL]^2xT]^", "LLT"), ("[LxT]^", "LT")):
            if t.startswith(prefix):
                return cls(kind, int(t[len(prefix):]))
        raise ValueError(f"cannot parse core {text!r}")


def catalog(lam: int, rank: int) -> list[Core]:
    """Cores of the given rank available when ``T`` has rank ``lam``."""
    out = []
    for kind, r in (("1", 0), ("L", 1), ("LL", 2), ("LLL", 3)):
        if r == rank:
            out.append(Core(kind, r))
    if rank == lam:
        out.append(Core("T", lam))
    if triangle(1, lam, rank):
        out.append(Core("LT", rank))
    if triangle(2, lam, rank):
        out.append(Core("LLT", rank))
    return out


def _tname(lam: int) -> str:
    return {1: "A", 2: "Q"}.get(lam, "T")


class TensorExpr:
    """``sum c_{k,core} L^{2k} core`` with all cores of one rank.

    Coefficients are :class:`RadicalNumber`; zero terms are dropped and the
    term mapping is keyed by ``(k, Core)``.  ``lam`` records the rank of the
    tensor ``T`` that the T-cores refer to.
    """

    __slots__ = ("rank", "lam", "_terms")

    def __init__(self, rank: int, terms: Mapping | None = None, lam: int = 1):
        self.rank = rank
        self.lam = lam
        acc: dict = {}
        for (k, core), c in (terms or {}).items():
            if isinstance(core, str):
                core = Core.parse(core, lam)
            if core.rank != rank:
                raise ValueError(f"core {core} does not have rank {rank}")
            if k < 0:
                raise ValueError("negative power of L^2")
            c = as_radical(c)
            v = acc.get((k, core), RadicalNumber()) + c
            if v:
                acc[(k, core)] = v
            else:
                acc.pop((k, core), None)
        self._terms = dict(sorted(acc.items()))

    @classmethod
    def zero(cls, rank: int, lam: int = 1) -> TensorExpr:
        return cls(rank, {}, lam)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def coeff(self, k: int, core: Core | str) -> RadicalNumber:
        if isinstance(core, str):
            core = Core.parse(core, self.lam)
        return self._terms.get((k, core), RadicalNumber())

    def is_zero(self) -> bool:
        return not self._terms

    def max_ldeg(self) -> int:
        return max((2 * k + c.ldeg for k, c in self._terms), default=0)

    def _check(self, other: TensorExpr) -> None:
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: TensorExpr) -> TensorExpr:
        if not isinstance(other, TensorExpr):
            return NotImplemented
        self._check(other)
        acc = dict(self._terms)
        for key, c in other._terms.items():
            acc[key] = acc.get(key, RadicalNumber()) + c
        return TensorExpr(self.rank, acc, self.lam)

    def __neg__(self) -> TensorExpr:
        return TensorExpr(self.rank, {k: -c for k, c in self._terms.items()}, self.lam)

    def __sub__(self, other: TensorExpr) -> TensorExpr:
        return self + (-other)

    def __mul__(self, c) -> TensorExpr:
        c = as_radical(c)
        if c is NotImplemented:
            return NotImplemented
        return TensorExpr(self.rank, {k: v * c for k, v in self._terms.items()}, self.lam)

    __rmul__ = __mul__

    def times_l2(self, j: int = 1) -> TensorExpr:
        """Multiply on the left by ``L^{2j}``."""
        return TensorExpr(
            self.rank, {(k + j, core): c for (k, core), c in self._terms.items()}, self.lam
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, TensorExpr):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        return hash((self.rank, tuple(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        name = _tname(self.lam)
        parts = []
        for (k, core), c in self._terms.items():
            op = {0: "", 1: "L^2 "}.get(k, f"L^{2 * k} ")
            lab = core.label(name)
            if lab == "1":
                body = op.strip() or "1"
            else:
                body = op + lab
            parts.append(f"({c}) {body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TensorExpr(rank={self.rank}, {self})"

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "lam": self.lam,
            "terms": [
                {"L2power": k, "core": core.label(_tname(self.lam)), "coeff": c.to_json()}
                for (k, core), c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> TensorExpr:
        if isinstance(data, str):
            data = json.loads(data)
        lam = data.get("lam", 1)
        terms = {
            (t["L2power"], Core.parse(t["core"], lam)): RadicalNumber.from_json(t["coeff"])
            for t in data["terms"]
        }
        return cls(data["rank"], terms, lam)


def L(lam: int = 1) -> TensorExpr:
    return TensorExpr(1, {(0, Core("L", 1)): 1}, lam)


def T(lam: int = 1) -> TensorExpr:
    return TensorExpr(lam, {(0, Core("T", lam)): 1}, lam)


def L2(k: int = 1, lam: int = 1) -> TensorExpr:
    """``L^{2k}`` as a scalar expression."""
    return TensorExpr(0, {(k, Core("1", 0)): 1}, lam)


# ---------------------------------------------------------------------------
# componentwise tensors


@dataclass
class Tensor:
    """Spherical components ``{M: Poly}`` of a rank-``rank`` operator."""

    rank: int
    comps: dict

    def __add__(self, other: Tensor) -> Tensor:
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        comps = {}
        for M in range(-self.rank, self.rank + 1):
            acc = dict(self.comps.get(M, {}))
            _padd(acc, other.comps.get(M, {}))
            comps[M] = acc
        return Tensor(self.rank, comps)

    def scale(self, c) -> Tensor:
        c = as_radical(c)
        return Tensor(self.rank, {M: _pscale(p, c) for M, p in self.comps.items()})

    def __neg__(self) -> Tensor:
        return Tensor(self.rank, {M: _pneg(p) for M, p in self.comps.items()})

    def __sub__(self, other: Tensor) -> Tensor:
        return self + (-other)

    def is_zero(self) -> bool:
        return all(not p for p in self.comps.values())


class Algebra:
    """Normal-ordering engine for the algebra generated by ``L`` and ``T^lam``.

    Parameters
    ----------
    lam : int
        Rank of ``T``.
    tt : mapping, optional
        ``{Lam: TensorExpr}`` giving ``[T, T]^Lam = f^Lam(L)`` for odd ``Lam``.
        Without it the engine refuses to reorder two ``T`` components.
    """

    def __init__(self, lam: int = 1, tt: Mapping[int, TensorExpr] | None = None):
        if lam < 1:
            raise ValueError("lam must be a positive integer")
        self.lam = lam
        self.ngen = 3 + 2 * lam + 1
        self._gm: dict = {}
        self._mm: dict = {}
        self._br: dict = {}
        self._core_cache: dict = {}
        self._l2_cache: dict = {0: {((), 1): F1}}
        self._basis_cache: dict = {}
        self.has_tt = False
        self._init_brackets()
        if tt:
            self._set_tt(tt)

    # generator bookkeeping ---------------------------------------------

    def gen_index(self, which: str, m: int) -> int:
        if which == "L":
            return 1 - m
        return 3 + self.lam - m

    def gen_weight(self, i: int) -> int:
        return 1 - i if i < 3 else self.lam - (i - 3)

    def _gen(self, i: int) -> Poly:
        return {((i,), 1): F1}

    def _rad_poly(self, mono: tuple, c: RadicalNumber) -> Poly:
        return {(mono, r): q for r, q in c.terms.items()}

    def _init_brackets(self) -> None:
        lam = self.lam
        for m in (1, 0, -1):
            for n in (1, 0, -1):
                g, h = self.gen_index("L", m), self.gen_index("L", n)
                if g > h and abs(m + n) <= 1:
                    c = clebsch_gordan(1, m, 1, n, 1, m + n) * sqrt_of_rational(2) * -1
                    self._br[(g, h)] = self._rad_poly((self.gen_index("L", m + n),), c)
                elif g > h:
                    self._br[(g, h)] = {}
        for mu in range(-lam, lam + 1):
            for m in (1, 0, -1):
                g, h = self.gen_index("T", mu), self.gen_index("L", m)
                if abs(m + mu) <= lam:
                    # [T_mu, L_m] = -[L_m, T_mu]
                    c = clebsch_gordan(1, m, lam, mu, lam, m + mu) * sqrt_of_rational(lam * (lam + 1))
                    self._br[(g, h)] = self._rad_poly((self.gen_index("T", m + mu),), c)
                else:
                    self._br[(g, h)] = {}

    def _set_tt(self, tt: Mapping[int, TensorExpr]) -> None:
        lam = self.lam
        fcomps = {}
        for Lam, expr in tt.items():
            if Lam % 2 == 0 or not 1 <= Lam <= 2 * lam - 1:
                raise ValueError(f"[T,T]^{Lam} must vanish; only odd ranks up to {2 * lam - 1}")
            if expr.rank != Lam:
                raise ValueError("f^Lam must have rank Lam")
            if any(core.tdeg for _, core in expr.terms):
                raise ValueError("[T,T] must be a function of L only")
            fcomps[Lam] = self.to_tensor(expr)
        for mu in range(-lam, lam + 1):
            for nu in range(-lam, lam + 1):
                g, h = self.gen_index("T", mu), self.gen_index("T", nu)
                if g <= h:
                    continue
                acc: Poly = {}
                for Lam, f in fcomps.items():
                    if abs(mu + nu) <= Lam:
                        cg = clebsch_gordan(lam, mu, lam, nu, Lam, mu + nu)
                        if cg:
                            _padd(acc, _pscale(f.comps[mu + nu], cg))
                self._br[(g, h)] = acc
        self.has_tt = True
        self._gm.clear()
        self._mm.clear()
        self._core_cache.clear()
        self._l2_cache = {0: {((), 1): F1}}
        self._basis_cache.clear()

    def bracket_gen(self, g: int, h: int) -> Poly:
        """``[gen_g, gen_h]`` as a normal-ordered polynomial."""
        if g == h:
            return {}
        if g > h:
            key = (g, h)
            if key not in self._br:
                raise OutsideCatalogError(
                    "reordering two T components needs the [T,T] bracket; "
                    "construct the Algebra with tt=..."
                )
            return self._br[key]
        return _pneg(self.bracket_gen(h, g))

    # normal ordering ----------------------------------------------------

    def _gen_mul(self, g: int, m: tuple) -> Poly:
        key = (g, m)
        hit = self._gm.get(key)
        if hit is not None:
            return hit
        if not m or g <= m[0]:
            out = {((g,) + m, 1): F1}
        else:
            h, rest = m[0], m[1:]
            out: Poly = {}
            for (n, r), q in self._gen_mul(g, rest).items():
                for (n2, r2), q2 in self._gen_mul(h, n).items():
                    _acc_term(out, n2, r, r2, q * q2)
            if (g, h) not in self._br:
                raise OutsideCatalogError(
                    "reordering two T components needs the [T,T] bracket; "
                    "construct the Algebra with tt=..."
                )
            for (n, r), q in self._br[(g, h)].items():
                for (n2, r2), q2 in self._mono_mul(n, rest).items():
                    _acc_term(out, n2, r, r2, q * q2)
        self._gm[key] = out
        return out

    def _mono_mul(self, a: tuple, b: tuple) -> Poly:
        if not a:
            return {(b, 1): F1}
        if not b or a[-1] <= b[0]:
            return {(a + b, 1): F1}
        key = (a, b)
        hit = self._mm.get(key)
        if hit is not None:
            return hit
        out: Poly = {}
        for (n, r), q in self._gen_mul(a[-1], b).items():
            for (n2, r2), q2 in self._mono_mul(a[:-1], n).items():
                _acc_term(out, n2, r, r2, q * q2)
        self._mm[key] = out
        return out

    def mul(self, p: Poly, s: Poly) -> Poly:
        out: Poly = {}
        for (m1, r1), q1 in p.items():
            for (m2, r2), q2 in s.items():
                g = math.gcd(r1, r2)
                r12 = (r1 // g) * (r2 // g)
                qq = q1 * q2 * g
                for (n, r), q in self._mono_mul(m1, m2).items():
                    _acc_term(out, n, r12, r, qq * q)
        return out

    def commutator(self, p: Poly, s: Poly) -> Poly:
        out = self.mul(p, s)
        _padd(out, self.mul(s, p), -F1)
        return out

    # tensors ------------------------------------------------------------

    def L_tensor(self) -> Tensor:
        return Tensor(1, {m: self._gen(self.gen_index("L", m)) for m in (-1, 0, 1)})

    def T_tensor(self) -> Tensor:
        lam = self.lam
        return Tensor(lam, {mu: self._gen(self.gen_index("T", mu)) for mu in range(-lam, lam + 1)})

    def l2_power(self, k: int) -> Poly:
        """Normal-ordered ``(L.L)^k``."""
        if k not in self._l2_cache:
            if 1 not in self._l2_cache:
                acc: Poly = {}
                for m in (1, 0, -1):
                    term = self.mul(self._gen(self.gen_index("L", m)),
                                    self._gen(self.gen_index("L", -m)))
                    _padd(acc, term, Fraction((-1) ** m))
                self._l2_cache[1] = acc
            prev = self.l2_power(k - 1)
            self._l2_cache[k] = self.mul(self._l2_cache[1], prev)
        return self._l2_cache[k]

    def product(self, x: Tensor, y: Tensor, rank: int, only: Iterable[int] | None = None) -> Tensor:
        """Coupled product ``[x × y]^rank``."""
        return self._couple(x, y, rank, only, self.mul)

    def bracket(self, x: Tensor, y: Tensor, rank: int, only: Iterable[int] | None = None) -> Tensor:
        """Coupled commutator ``[x, y]^rank``."""
        return self._couple(x, y, rank, only, self.commutator)

    def _couple(self, x: Tensor, y: Tensor, rank: int, only, op) -> Tensor:
        if not triangle(x.rank, y.rank, rank):
            raise ValueError(f"ranks ({x.rank}, {y.rank}) cannot couple to {rank}")
        Ms = range(-rank, rank + 1) if only is None else only
        comps = {}
        for M in Ms:
            acc: Poly = {}
            for m1 in range(-x.rank, x.rank + 1):
                m2 = M - m1
                if abs(m2) > y.rank:
                    continue
                cg = clebsch_gordan(x.rank, m1, y.rank, m2, rank, M)
                if not cg:
                    continue
                px, py = x.comps.get(m1), y.comps.get(m2)
                if not px or not py:
                    continue
                _padd(acc, _pscale(op(px, py), cg))
            comps[M] = acc
        return Tensor(rank, comps)

    def core_tensor(self, core: Core) -> Tensor:
        hit = self._core_cache.get(core)
        if hit is not None:
            return hit
        Lt = self.L_tensor()
        kind = core.kind
        if kind == "1":
            t = Tensor(0, {0: {((), 1): F1}})
        elif kind == "L":
            t = Lt
        elif kind == "LL":
            t = self.product(Lt, Lt, 2)
        elif kind == "LLL":
            t = self.product(self.core_tensor(Core("LL", 2)), Lt, 3)
        elif kind == "T":
            if core.rank != self.lam:
                raise ValueError(f"T has rank {self.lam} in this algebra")
            t = self.T_tensor()
        elif kind == "LT":
            t = self.product(Lt, self.T_tensor(), core.rank)
        else:
            t = self.product(self.core_tensor(Core("LL", 2)), self.T_tensor(), core.rank)
        self._core_cache[core] = t
        return t

    def to_tensor(self, expr: TensorExpr) -> Tensor:
        if expr.lam != self.lam and any(c.tdeg for _, c in expr.terms):
            raise ValueError(f"expression built for lam={expr.lam}, algebra has lam={self.lam}")
        r = expr.rank
        comps = {M: {} for M in range(-r, r + 1)}
        for (k, core), c in expr.terms.items():
            ct = self.core_tensor(core)
            l2k = self.l2_power(k)
            for M in comps:
                _padd(comps[M], _pscale(self.mul(l2k, ct.comps[M]), c))
        return Tensor(r, comps)

    def _basis_poly(self, k: int, core: Core) -> Poly:
        key = (k, core)
        hit = self._basis_cache.get(key)
        if hit is None:
            hit = self.mul(self.l2_power(k), self.core_tensor(core).comps[0])
            self._basis_cache[key] = hit
        return hit

    def identify(self, t: Tensor) -> TensorExpr:
        """Write a tensor over the core catalog (exactly) or raise."""
        if t.rank != int(t.rank):
            raise OutsideCatalogError("half-integer ranks are not in the catalog")
        target = t.comps.get(0, {})
        if not target:
            return TensorExpr.zero(t.rank, self.lam)
        maxdeg = 0
        nt = 3
        for (m, _r) in target:
            tdeg = sum(1 for g in m if g >= nt)
            if tdeg > 1:
                raise OutsideCatalogError(
                    f"normal form has T-degree {tdeg}; the catalog stops at degree 1"
                )
            maxdeg = max(maxdeg, len(m) - tdeg)
        cols = []
        for core in catalog(self.lam, t.rank):
            for k in range((maxdeg - core.ldeg) // 2 + 1):
                if 2 * k + core.ldeg <= maxdeg:
                    cols.append((k, core))
        if not cols:
            raise OutsideCatalogError(f"no rank-{t.rank} cores for lam={self.lam}")
        basis = [_coeff_at(self._basis_poly(k, core)) for k, core in cols]
        tgt = _coeff_at(target)
        sol = _solve_sparse(basis, tgt)
        if sol is None:
            raise OutsideCatalogError(
                f"rank-{t.rank} result is not a combination of catalog cores"
            )
        expr = TensorExpr(t.rank, {col: c for col, c in zip(cols, sol) if c}, self.lam)
        # exact confirmation on the full component
        resid = dict(target)
        for (k, core), c in expr.terms.items():
            _padd(resid, _pscale(self._basis_poly(k, core), c), -F1)
        if resid:
            raise OutsideCatalogError(
                f"rank-{t.rank} result is not a combination of catalog cores"
            )
        return expr


def _acc_term(out: Poly, mono: tuple, r1: int, r2: int, q: Fraction) -> None:
    if r1 == 1:
        key, qq = (mono, r2), q
    elif r2 == 1:
        key, qq = (mono, r1), q
    else:
        g = math.gcd(r1, r2)
        key, qq = (mono, (r1 // g) * (r2 // g)), q * g
    v = out.get(key, F0) + qq
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _solve_sparse(basis: list[dict], target: dict) -> list[RadicalNumber] | None:
    """Solve ``sum_j c_j basis_j == target`` exactly over the radical field.

    Each basis vector and the target are ``{row_key: RadicalNumber}``.  Rows
    are scanned greedily, leading monomials of the basis vectors first, and
    reduced against the pivots found so far; the first ``n`` independent rows
    fix the solution.  Returns ``None`` when the target is outside the span.
    """
    n = len(basis)
    lead = []
    for b in basis:
        if b:
            lead.append(max(b, key=lambda m: (len(m), m)))
    order = list(dict.fromkeys(lead))
    seen = set(order)
    allrows = set(target)
    for b in basis:
        allrows.update(b)
    rest = sorted(allrows - seen, key=lambda m: (-len(m), m))
    order.extend(rest)

    pivots: list[tuple[int, dict, RadicalNumber]] = []  # (col, row, rhs) with row[col] == 1
    zero = RadicalNumber()
    for key in order:
        row = {j: b[key] for j, b in enumerate(basis) if key in b}
        rhs = target.get(key, zero)
        for col, prow, prhs in pivots:
            f = row.get(col)
            if f:
                for j, v in prow.items():
                    nv = row.get(j, zero) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                rhs = rhs - f * prhs
        if not row:
            if rhs:
                return None
            continue
        col = min(row)
        inv = row[col].inverse()
        row = {j: v * inv for j, v in row.items()}
        rhs = rhs * inv
        # keep pivots fully reduced against the new one
        new = []
        for c2, prow, prhs in pivots:
            f = prow.get(col)
            if f:
                prow = dict(prow)
                for j, v in row.items():
                    nv = prow.get(j, zero) - f * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
                prhs = prhs - f * rhs
            new.append((c2, prow, prhs))
        new.append((col, row, rhs))
        pivots = new
        if len(pivots) == n:
            break
    sol = [zero] * n
    for col, prow, prhs in pivots:
        if len(prow) != 1:
            # rank-deficient basis; remaining free columns set to zero
            pass
        sol[col] = prhs
    return sol


# ---------------------------------------------------------------------------
# public operations on catalog expressions

_DEFAULT: dict = {}


def _algebra_for(lam: int, algebra: Algebra | None) -> Algebra:
    if algebra is not None:
        return algebra
    if lam not in _DEFAULT:
        _DEFAULT[lam] = Algebra(lam)
    return _DEFAULT[lam]


def coupled_product(x: TensorExpr, y: TensorExpr, rank: int, algebra: Algebra | None = None) -> TensorExpr:
    """``[x × y]^rank`` rewritten over the catalog."""
    alg = _algebra_for(max(x.lam, y.lam), algebra)
    t = alg.product(alg.to_tensor(x), alg.to_tensor(y), rank)
    return alg.identify(t)


def coupled_commutator(x: TensorExpr, y: TensorExpr, rank: int, algebra: Algebra | None = None) -> TensorExpr:
    """``[x, y]^rank`` rewritten over the catalog."""
    alg = _algebra_for(max(x.lam, y.lam), algebra)
    t = alg.bracket(alg.to_tensor(x), alg.to_tensor(y), rank)
    return alg.identify(t)


def _ranks(a: int, b: int) -> range:
    return range(abs(a - b), a + b + 1)


def leibniz_expand(t: TensorExpr, u: TensorExpr, v: TensorExpr, rank23: int, rank: int,
                   algebra: Algebra | None = None,
                   tu: Mapping[int, TensorExpr] | None = None,
                   tv: Mapping[int, TensorExpr] | None = None) -> TensorExpr:
    """``[t, [u × v]^rank23]^rank`` through the coupled Leibniz rule.

    The outer commutator is distributed over the product with unitary Racah
    coefficients, so ``[t, u]^r12`` and ``[t, v]^r13`` are the only brackets
    needed.  Known values for them can be passed in ``tu`` / ``tv`` (keyed by
    rank); anything not supplied is computed by the engine.
    """
    alg = _algebra_for(max(t.lam, u.lam, v.lam), algebra)
    tt, ut, vt = alg.to_tensor(t), alg.to_tensor(u), alg.to_tensor(v)
    known_u = {r: alg.to_tensor(e) for r, e in (tu or {}).items()}
    known_v = {r: alg.to_tensor(e) for r, e in (tv or {}).items()}
    return alg.identify(_leibniz_tensor(alg, tt, ut, vt, rank23, rank, known_u, known_v))


def _leibniz_tensor(alg: Algebra, tt: Tensor, ut: Tensor, vt: Tensor, rank23: int, rank: int,
                    known_u: dict | None = None, known_v: dict | None = None) -> Tensor:
    known_u = known_u or {}
    known_v = known_v or {}
    l1, l2, l3 = tt.rank, ut.rank, vt.rank
    if not triangle(l2, l3, rank23) or not triangle(l1, rank23, rank):
        raise ValueError("invalid couplings for the Leibniz rule")
    acc = Tensor(rank, {M: {} for M in range(-rank, rank + 1)})
    for r12 in _ranks(l1, l2):
        if not triangle(r12, l3, rank):
            continue
        w = racah_unitary(l1, l2, rank, l3, r12, rank23)
        if w:
            inner = known_u[r12] if r12 in known_u else alg.bracket(tt, ut, r12)
            acc = acc + alg.product(inner, vt, rank).scale(w)
    for r13 in _ranks(l1, l3):
        if not triangle(l2, r13, rank):
            continue
        w = racah_unitary(l1, l3, rank, l2, r13, rank23)
        if w:
            sign = -1 if (l3 + rank - r13 - rank23) % 2 else 1
            inner = known_v[r13] if r13 in known_v else alg.bracket(tt, vt, r13)
            acc = acc + alg.product(ut, inner, rank).scale(w * sign)
    return acc


def jacobi_residual(x: TensorExpr, y: TensorExpr, z: TensorExpr, rank23: int, rank: int,
                    algebra: Algebra | None = None) -> TensorExpr:
    """Left-hand side of the coupled Jacobi identity for ``(x, y, z)``.

    Returns ``[x,[y,z]^r23]^r + sum U(...) [y,[z,x]^r31]^r + sum U(...) [z,[x,y]^r12]^r``,
    which vanishes in an associative algebra.
    """
    alg = _algebra_for(max(x.lam, y.lam, z.lam), algebra)
    xt, yt, zt = alg.to_tensor(x), alg.to_tensor(y), alg.to_tensor(z)
    return alg.identify(_jacobi_tensor(alg, xt, yt, zt, rank23, rank))


def _jacobi_tensor(alg: Algebra, xt: Tensor, yt: Tensor, zt: Tensor, rank23: int, rank: int) -> Tensor:
    l1, l2, l3 = xt.rank, yt.rank, zt.rank
    acc = alg.bracket(xt, alg.bracket(yt, zt, rank23), rank)
    for r31 in _ranks(l3, l1):
        if not triangle(l2, r31, rank):
            continue
        w = racah_unitary(l2, l3, rank, l1, rank23, r31)
        if w:
            sign = -1 if (l1 + rank23 - rank) % 2 else 1
            acc = acc + alg.bracket(yt, alg.bracket(zt, xt, r31), rank).scale(w * sign)
    for r12 in _ranks(l1, l2):
        if not triangle(l3, r12, rank):
            continue
        w = racah_unitary(l1, l2, rank, l3, r12, rank23)
        if w:
            sign = -1 if (l3 + r12 - rank) % 2 else 1
            acc = acc + alg.bracket(zt, alg.bracket(xt, yt, r12), rank).scale(w * sign)
    return acc


# ---------------------------------------------------------------------------
# Jacobi conditions on [T, [T, T]]


@dataclass(frozen=True)
class JacobiCondition:
    """``sum_{r12} coeffs[r12] * [T, [T, T]^r12]^rank = 0``."""

    rank: int
    coeffs: dict

    def ratio(self, a: int, b: int) -> RadicalNumber:
        return self.coeffs[b] / self.coeffs[a]

    def __str__(self) -> str:
        parts = [f"({c}) [T,[T,T]^{r}]^{self.rank}" for r, c in sorted(self.coeffs.items()) if c]
        return " + ".join(parts) + " = 0"


@dataclass(frozen=True)
class JacobiSystem:
    lam: int
    raw: tuple  # ((rank23, rank, {r12: coeff}), ...)
    independent: tuple  # JacobiCondition, ...

    def raw_row(self, rank23: int, rank: int) -> dict:
        for r23, r, row in self.raw:
            if (r23, r) == (rank23, rank):
                return row
        raise KeyError((rank23, rank))


@lru_cache(maxsize=None)
def jacobi_conditions(lam: int) -> JacobiSystem:
    """Conditions imposed on ``[T,[T,T]^r12]^r`` by the (T,T,T) Jacobi identity.

    Each ``(r23, r)`` gives a row with entries
    ``delta(r12, r23) - 2 (-1)**(lam - r) U(lam lam r lam; r12 r23)``; rows
    sharing the outer rank ``r`` are row-reduced exactly and the surviving
    independent conditions are returned.
    """
    if lam < 1 or int(lam) != lam:
        raise ValueError("lam must be a positive integer")
    odd = list(range(1, 2 * lam, 2))
    raw = []
    by_rank: dict = {}
    for r23 in odd:
        for r in _ranks(lam, r23):
            row = {}
            for r12 in odd:
                if not triangle(lam, r12, r):
                    continue
                c = RadicalNumber.rational(1 if r12 == r23 else 0)
                c = c - racah_unitary(lam, lam, r, lam, r12, r23) * (2 * (-1) ** ((lam - r) % 2))
                row[r12] = c
            raw.append((r23, r, row))
            by_rank.setdefault(r, []).append(row)
    conds = []
    for r in sorted(by_rank):
        for row in _row_reduce(by_rank[r]):
            conds.append(JacobiCondition(r, row))
    return JacobiSystem(lam, tuple(raw), tuple(conds))


def _row_reduce(rows: list[dict]) -> list[dict]:
    zero = RadicalNumber()
    pivots: list[tuple[int, dict]] = []
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        for col, prow in pivots:
            f = row.get(col)
            if f:
                for j, v in prow.items():
                    nv = row.get(j, zero) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        if not row:
            continue
        col = min(row)
        inv = row[col].inverse()
        row = {j: v * inv for j, v in row.items()}
        out = []
        for c2, prow in pivots:
            f = prow.get(col)
            if f:
                prow = {j: prow.get(j, zero) - f * row.get(j, zero) for j in set(prow) | set(row)}
                prow = {j: v for j, v in prow.items() if v}
            out.append((c2, prow))
        out.append((col, row))
        pivots = out
    return [p for _, p in sorted(pivots, key=lambda t: t[0])]

"""Command-line entry point: ``defangmom <subcommand> ...``.

Every subcommand prints either a plain-text report or a JSON document
(``--format json``).  JSON carries ``"schema": 1`` and is written with
sorted keys and two-space indent, so re-serializing a parsed file gives the
same bytes.  Exit status: 0 success, 1 a verification failed, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .angmom import clebsch_gordan, racah_unitary, racah_w
from .exactnum import RadicalNumber

SCHEMA = 1


class UsageError(Exception):
    pass


def _num(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _arg_num(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _num_list(text: str | None) -> list[Fraction]:
    if not text:
        return []
    return [_num(t) for t in text.split(",") if t.strip()]


def _exact(x: RadicalNumber) -> dict:
    return {"exact": str(x), "float": float(x), "terms": x.to_json()}


def table_style(x: RadicalNumber) -> str:
    """Write single-radical values as ``n*sqrt(a/b)`` when that avoids a fraction.

    ``4/3*sqrt(15)`` becomes ``4*sqrt(5/3)``; anything else is left in the
    canonical form.
    """
    terms = x.terms
    if len(terms) != 1:
        return str(x)
    (r, q), = terms.items()
    d = q.denominator
    if r == 1 or d == 1 or r % d:
        return str(x)
    inner = Fraction(r // d, d)
    return f"{q.numerator}*sqrt({inner.numerator}/{inner.denominator})"


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, text, json document)


def cmd_cg(args) -> tuple[int, str, dict]:
    j1, m1, j2, m2, J, M = (_num(x) for x in args.args)
    v = clebsch_gordan(j1, m1, j2, m2, J, M)
    label = f"<{j1} {m1}, {j2} {m2} | {J} {M}>"
    doc = {"args": [str(a) for a in (j1, m1, j2, m2, J, M)], "value": _exact(v)}
    return 0, f"{label} = {v}  ({float(v):.15g})\n", doc


def cmd_racah(args) -> tuple[int, str, dict]:
    vals = [_num(x) for x in args.args]
    u, w = racah_unitary(*vals), racah_w(*vals)
    a, b, c, d, e, f = vals
    text = (f"U({a} {b} {c} {d}; {e} {f}) = {u}  ({float(u):.15g})\n"
            f"W({a} {b} {c} {d}; {e} {f}) = {w}  ({float(w):.15g})\n")
    return 0, text, {"args": [str(v) for v in vals], "U": _exact(u), "W": _exact(w)}


def cmd_table1(args) -> tuple[int, str, dict]:
    from .vectordef import solve_recursion

    if args.kmax < 1 or args.kmin < 1 or args.kmin > args.kmax:
        raise UsageError("--kmin/--kmax must satisfy 1 <= kmin <= kmax")
    tab = solve_recursion(args.kmax)
    width = args.kmax
    head = ["", *(f"i={i}" for i in range(width))]
    rows = [head]
    doc_rows = []
    for k in range(args.kmin, args.kmax + 1):
        for name, n in (("x", k), ("y", k), ("z", k - 1)):
            vals = [getattr(tab, name)(k, i) for i in range(n)]
            rows.append([f"{name}^({k})_i", *(table_style(v) for v in vals),
                         *("---" for _ in range(width - n))])
            doc_rows.append({"k": k, "name": name,
                             "values": [{"exact": str(v), "table": table_style(v), "float": float(v)}
                                        for v in vals]})
    widths = [max(len(r[c]) for r in rows) for c in range(len(head))]
    text = "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows) + "\n"
    return 0, text, {"kmin": args.kmin, "kmax": args.kmax, "rows": doc_rows}


def cmd_associativity(args) -> tuple[int, str, dict]:
    from .vectordef import check_associativity

    if args.order < 0:
        raise UsageError("--order must be nonnegative")
    rep = check_associativity(args.order)
    lines = [f"[[A, L^{2 * k}]^1 x L]^0 = {e}" for k, e in rep.per_k.items()]
    lines += [f"induction step k={k} -> k={k + 1}: {'holds' if ok else 'FAILS'}"
              for k, ok in rep.induction.items()]
    lines.append(f"verdict: {rep.to_json()['verdict']}")
    return (0 if rep.ok else 1), "\n".join(lines) + "\n", rep.to_json()


def cmd_casimir(args) -> tuple[int, str, dict]:
    from .vectordef import (
        DeformationParams,
        InconsistentSystemError,
        casimir_linear_forms,
        compare_printed_casimir,
        solve_casimir,
    )

    a = _num_list(args.params)
    if args.a0 not in (1, -1, 0):
        raise UsageError("--a0 must be 1, -1 or 0")
    order = args.order if args.order is not None else len(a)
    if order < 0 or len(a) > order:
        raise UsageError(f"--params has {len(a)} entries but --order is {order}")
    lines = []
    doc: dict = {"order": order}
    code = 0
    try:
        forms = casimir_linear_forms(order)
    except InconsistentSystemError as exc:
        return 1, f"inconsistent system: {exc}\n", {"order": order, "error": str(exc)}
    names = [f"a{j}" for j in range(order + 1)]
    lines.append("h(L^2) = sum_k b_k L^(2k), with")
    sym = []
    for k, row in enumerate(forms, start=1):
        expr = " + ".join(f"{c}*{n}" for c, n in zip(row, names) if c).replace("+ -", "- ") or "0"
        lines.append(f"  b{k} = {expr}")
        sym.append({"k": k, "coeffs": [str(c) for c in row]})
    doc["linear_forms"] = sym
    if args.params is not None:
        p = DeformationParams(args.a0, tuple(a) + (0,) * (order - len(a)))
        try:
            rep = solve_casimir(p, engine_check=not args.no_engine_check)
        except InconsistentSystemError as exc:
            return 1, f"inconsistent system: {exc}\n", {"order": order, "error": str(exc)}
        lines.append(f"for a0={p.a0}, a=({', '.join(str(x) for x in p.a)}):")
        for k, b in enumerate(rep.coeffs.b, start=1):
            lines.append(f"  b{k} = {b}  ({float(b):.15g})")
        lines.append(f"  [A, h(L^2) + A^2]^1 from the expansion: {'0' if rep.assembled_zero else 'NONZERO'}")
        if rep.engine_zero is not None:
            lines.append(f"  [A, h(L^2) + A^2]^1 from the engine:    {'0' if rep.engine_zero else 'NONZERO'}")
        doc["params"] = {"a0": p.a0, "a": [str(x) for x in p.a]}
        doc["b"] = [{"exact": str(b), "float": float(b)} for b in rep.coeffs.b]
        doc["consistency"] = rep.consistency
        doc["assembled_zero"] = rep.assembled_zero
        doc["engine_zero"] = rep.engine_zero
        code = 0 if rep.ok else 1
    if args.compare_paper:
        cmp = compare_printed_casimir()
        lines.append("comparison with the printed fourth-order coefficients:")
        for row in cmp:
            flag = "agree" if row["agree"] else "DIFFER"
            note = " (printed form lists a3 twice)" if row["suspect_print"] else ""
            lines.append(f"  b{row['k']}: {flag}{note}; computed {row['computed']}, printed {row['printed']}")
        doc["printed_comparison"] = cmp
    return code, "\n".join(lines) + "\n", doc


def cmd_jacobi(args) -> tuple[int, str, dict]:
    from .tensoralg import jacobi_conditions

    if args.lam < 1:
        raise UsageError("--lambda must be a positive integer")
    sysm = jacobi_conditions(args.lam)
    lines = [f"lambda = {args.lam}: {len(sysm.independent)} independent condition(s)"]
    tname = {1: "A", 2: "Q"}.get(args.lam, "T")
    for c in sysm.independent:
        lines.append("  " + str(c).replace("T", tname))
    doc = {
        "lambda": args.lam,
        "raw": [{"Lambda23": r23, "Lambda": r, "coeffs": {str(k): str(v) for k, v in row.items()}}
                for r23, r, row in sysm.raw],
        "independent": [{"Lambda": c.rank, "coeffs": {str(k): str(v) for k, v in c.coeffs.items()}}
                        for c in sysm.independent],
    }
    return 0, "\n".join(lines) + "\n", doc


def cmd_quadrupole(args) -> tuple[int, str, dict]:
    from .quaddef import first_order_obstruction, reduce_Q_brackets

    rep = first_order_obstruction()
    brackets = [reduce_Q_brackets(L) for L in (1, 3)]
    lines = ["first-order conditions  (alpha coeff, beta coeff):"]
    for r in rep.conditions:
        core = "[LxQ]" if r["core"] == "LQ" else "[[LxL]^2xQ]"
        lines.append(f"  Lambda={r['Lambda']} {core}^{r['Lambda']}: ({r['alpha']}, {r['beta']})")
    lines.append(f"rank {rep.rank}, per Lambda {rep.rank_per_Lambda}; solution space: {rep.solution_space}")
    lines.append(f"eps drops out: {rep.epsilon_free}; direct engine agrees: {rep.direct_agrees}; "
                 f"Jacobi with an L vanishes: {rep.mixed_jacobi_zero}")
    for b in brackets:
        lines.append(f"Lambda={b.Lam}: engine and Leibniz routes agree: {b.routes_agree}")
        for m in b.printed_mismatches():
            lines.append(f"  differs from printed closed form: {m}")
    lines.append(f"verdict: {rep.verdict}")
    doc = rep.to_json()
    doc["brackets"] = [b.to_json() for b in brackets]
    ok = rep.rank == 2 and rep.direct_agrees and rep.epsilon_free and rep.mixed_jacobi_zero \
        and all(b.routes_agree for b in brackets)
    return (0 if ok else 1), "\n".join(lines) + "\n", doc


def cmd_rep(args) -> tuple[int, str, dict]:
    from .repbuilder import (
        NonUnitaryError,
        casimir_eigenvalues,
        parse_label,
        realize,
        verify_realization,
    )
    from .vectordef import DeformationParams

    try:
        label = parse_label(args.algebra, args.label)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--label: {exc}") from None
    params = _num_list(args.params) or [Fraction({"so4": 1, "so31": -1, "e3": 0}[args.algebra])]
    a0 = params[0]
    expected = {"so4": 1, "so31": -1, "e3": 0}[args.algebra]
    if a0 != expected:
        raise UsageError(f"--params: a0 must be {expected} for {args.algebra}, got {a0}")
    p = DeformationParams(int(a0), tuple(params[1:]))
    if args.algebra != "so4" and args.cutoff is None:
        raise UsageError(f"--cutoff is required for {args.algebra}")
    doc: dict = {"algebra": args.algebra, "label": str(label),
                 "params": [str(x) for x in p.coeffs()],
                 "cutoff": None if args.cutoff is None else str(args.cutoff)}
    notes = []
    if getattr(label, "imaginary", False):
        notes.append("extension: imaginary c = i*nu handled by substituting c^2 = -nu^2 "
                     "in the deformed reduced matrix elements and Casimirs")
    if args.algebra == "e3" and label.l0.denominator == 2:
        notes.append("extension: half-integer l0 for e(3); unitarity decided by the scan")
    doc["notes"] = notes
    try:
        m = realize(label, p, args.cutoff)
        closed = casimir_eigenvalues(label, p)
    except NonUnitaryError as exc:
        doc["error"] = str(exc)
        return 1, f"{exc}\n", doc
    red = m.reduced
    doc["reduced_matrix_elements"] = {
        str(l): {"diag": red.diag[l], "down": red.down[l],
                 "up": None if red.up[l] != red.up[l] else red.up[l]}
        for l in red.ls
    }
    doc["casimir_closed_form"] = {"C1d": closed[0], "C2d": closed[1]}
    doc["h_coefficients"] = [str(b) for b in m.casimir.b]
    lines = [f"{args.algebra} {label}, g coefficients {[str(x) for x in p.coeffs()]}",
             f"tower l = {', '.join(str(l) for l in red.ls)}  (dimension {m.tower.dim})",
             f"closed form: C1d = {closed[0]:.15g}, C2d = {closed[1]:.15g}"]
    lines.extend(f"note: {n}" for n in notes)
    for l in red.ls:
        lines.append(f"  l={l}: <l||A||l> = {red.diag[l]:.12g}, <l-1||A||l> = {red.down[l]:.12g}")
    code = 0
    if args.verify:
        rep = verify_realization(m)
        doc["verification"] = rep.to_json()
        doc["casimir_spectrum"] = rep.casimir_spectrum
        lines.append(f"spectrum:    C1d = {rep.casimir_spectrum['C1d']:.15g}, C2d = {rep.casimir_spectrum['C2d']:.15g}")
        where = "all states" if rep.interior_lmax is None else f"states with l <= {rep.interior_lmax}"
        lines.append(f"residuals on {where} (tolerance {rep.tol:g}):")
        for k, v in rep.residuals.items():
            lines.append(f"  {k}: {v:.3e}")
        cas_ok = rep.casimir_mismatch < max(rep.tol, 1e-9)
        code = 0 if (rep.ok and cas_ok) else 1
        lines.append("verification " + ("passed" if code == 0 else "FAILED"))
    return code, "\n".join(lines) + "\n", doc


# ---------------------------------------------------------------------------


# argparse only recognizes "-1" and "-0.5" as negative numbers; projections
# such as "-1/2" must not be mistaken for option flags.
_NEGATIVE_NUMBER = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="defangmom", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cg", parents=[common], help="Clebsch-Gordan coefficient <j1 m1, j2 m2 | J M>")
    s.add_argument("args", nargs=6, metavar="J", help="j1 m1 j2 m2 J M (e.g. 1 1 1 -1 0 0)")
    s.set_defaults(func=cmd_cg)

    s = sub.add_parser("racah", parents=[common], help="unitary Racah coefficient U(abcd;ef)")
    s.add_argument("args", nargs=6, metavar="J", help="a b c d e f")
    s.set_defaults(func=cmd_racah)

    s = sub.add_parser("table1", parents=[common], help="x, y, z coefficients of [A, L^2k]^1")
    s.add_argument("--kmax", type=int, default=5)
    s.add_argument("--kmin", type=int, default=2)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("associativity", parents=[common], help="check [[A, L^2k]^1 x L]^0 = 0 up to k = K")
    s.add_argument("--order", type=int, default=4)
    s.set_defaults(func=cmd_associativity)

    s = sub.add_parser("casimir", parents=[common], help="solve for h(L^2) in C_1d = h(L^2) + A^2")
    s.add_argument("--order", type=int, help="deformation order K (default: number of --params)")
    s.add_argument("--params", help="a1,a2,...,aK (omit for the symbolic linear forms only)")
    s.add_argument("--a0", type=int, default=1, help="1 so(4), -1 so(3,1), 0 e(3)")
    s.add_argument("--compare-paper", action="store_true",
                   help="compare with the printed fourth-order b_k")
    s.add_argument("--no-engine-check", action="store_true",
                   help="skip the direct tensor-engine check of [A, C_1d]^1")
    s.set_defaults(func=cmd_casimir)

    s = sub.add_parser("jacobi", parents=[common], help="independent (T,T,T) Jacobi conditions for rank lambda")
    s.add_argument("--lambda", dest="lam", type=int, required=True)
    s.set_defaults(func=cmd_jacobi)

    s = sub.add_parser("quadrupole", parents=[common], help="first-order quadrupole obstruction")
    s.set_defaults(func=cmd_quadrupole)

    s = sub.add_parser("rep", parents=[common], help="matrix realization of a deformed unirrep")
    s.add_argument("--algebra", choices=("so4", "so31", "e3"), required=True)
    s.add_argument("--label", required=True, help="p,q | l0,c (c may be e.g. 0.5i) | l0,eps")
    s.add_argument("--params", default="", help="a0,a1,... (a0 must match the algebra)")
    s.add_argument("--cutoff", type=_arg_num, help="largest l kept (so31/e3)")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--json", dest="json_out", help="also write the JSON report here")
    s.set_defaults(func=cmd_rep)
    for parser in [ap, *sub.choices.values()]:
        parser._negative_number_matcher = _NEGATIVE_NUMBER
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        code, text, doc = args.func(args)
    except UsageError as exc:
        ap.error(str(exc))  # exits with status 2
    doc = {"schema": SCHEMA, "command": args.command, **doc}
    body = dumps(doc) if args.format == "json" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    json_out = getattr(args, "json_out", None)
    if json_out:
        with open(json_out, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())

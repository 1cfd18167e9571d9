"""Command-line entry point.

Exit codes: 0 success, 1 mathematical failure (residuals are listed),
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .axioms import NotAnLSCA, check_lie, check_lsca, subadjacent
from .core import CONFORMAL, FreeModule, LambdaTable, ModuleMismatch, OperatorTable
from .flagdatum import (
    DEFAULT_BETAS,
    EquivWitness,
    build_flag_extension,
    check_dflc_membership,
    check_equiv,
    check_flag,
    search_equiv,
)
from .io import (
    AlgebraFile,
    DatumFile,
    SchemaError,
    algebra_json,
    datum_json,
    dumps,
    load,
    load_algebra,
    load_datum,
)
from .operators import (
    DEFAULT_BOUND,
    SymbolicParameters,
    check_derivation,
    check_semiquasicentroid,
    solve_derivations,
    solve_inner_witness,
)
from .parsing import ParseError, parse_linear
from .products import (
    DatumError,
    ProductAlgebra,
    build_unified,
    check_bicrossed,
    check_crossed,
    check_extending_structure,
    extract_datum,
)

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---- argument helpers -------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _bindings(items: Optional[List[str]]) -> Dict[str, Fraction]:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--bind expects name=rational, got {item!r}")
        out[name.strip()] = _rational(val)
    return out


def _apply_bindings(obj, declared, file_bindings, cli_bindings):
    merged = {**file_bindings, **cli_bindings}
    unknown = set(cli_bindings) - set(declared)
    if unknown:
        raise UsageError(f"--bind names undeclared parameter(s): {', '.join(sorted(unknown))}")
    return obj.assign(merged) if merged else obj


def _algebra(args) -> tuple:
    af = load_algebra(args.file)
    t = _apply_bindings(af.table, af.params, af.bindings, _bindings(args.bind))
    return af, t


def _datum(path, args) -> DatumFile:
    df = load_datum(path)
    binds = _bindings(args.bind)
    df.datum = _apply_bindings(df.datum, df.params, df.bindings, binds)
    if df.flag is not None:
        df.flag = _apply_bindings(df.flag, df.params, df.bindings, binds)
    return df


def _emit_report(name: str, report, args, extra: Optional[dict] = None) -> int:
    if args.json:
        obj = {"command": name, **report.to_dict()}
        if extra:
            obj.update(extra)
        sys.stdout.write(dumps(obj))
    else:
        if report.passed:
            print(f"{name}: passed")
        else:
            print(f"{name}: failed ({len(report.failures)} failure{'s' if len(report.failures) != 1 else ''})")
            for line in report.lines():
                print(f"  {line}")
        for note in report.notes:
            print(f"  note: {note}")
        for key, val in (extra or {}).items():
            print(f"{key}: {val}")
    return OK if report.passed else FAIL


def _operator(specs: Optional[List[str]], m: FreeModule, params) -> OperatorTable:
    vals = [None] * m.rank
    for item in specs or []:
        name, sep, expr = item.partition("=")
        name = name.strip()
        if not sep or name not in m.basis:
            raise UsageError(f"--map expects basis=expression with basis in {list(m.basis)}, got {item!r}")
        vals[m.index(name)] = parse_linear(expr, m.basis, params)
    return OperatorTable(m, m, vals, CONFORMAL)


def _print_algebra(t: LambdaTable, name: str, args):
    obj = algebra_json(t, name)
    if args.json:
        sys.stdout.write(dumps(obj))
    else:
        print(f"{name}: basis {', '.join(t.left.basis)}")
        if not obj["table"]:
            print("  all products zero")
        for key, val in obj["table"].items():
            i, j = (int(s) - 1 for s in key.strip("()").split(","))
            print(f"  {t.left.basis[i]}_lam {t.left.basis[j]} = {val[0]}")


# ---- commands ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    _, t = _algebra(args)
    return _emit_report("left-symmetry", check_lsca(t), args)


def cmd_check_lie(args) -> int:
    _, t = _algebra(args)
    return _emit_report("lie", check_lie(t), args)


def cmd_subadjacent(args) -> int:
    af, t = _algebra(args)
    try:
        lie = subadjacent(t)
    except NotAnLSCA as exc:
        return _emit_report("subadjacent", exc.report, args)
    _print_algebra(lie, f"sub-adjacent of {af.name or 'R'}", args)
    return OK


def cmd_check_datum(args) -> int:
    df = _datum(args.file, args)
    return _emit_report("extending-structure", check_extending_structure(df.datum), args)


def cmd_build_unified(args) -> int:
    df = _datum(args.file, args)
    try:
        P = build_unified(df.datum)
    except DatumError as exc:
        return _emit_report("extending-structure", exc.report, args)
    _print_algebra(P.table, "unified product", args)
    return OK


def cmd_extract_datum(args) -> int:
    af, t = _algebra(args)
    names = [s.strip() for s in args.r_basis.split(",") if s.strip()]
    m = t.left
    if not names or any(n not in m.basis for n in names) or len(set(names)) != len(names):
        raise UsageError(f"--r-basis must list distinct basis names from {list(m.basis)}")
    order = [m.index(n) for n in names] + [i for i, b in enumerate(m.basis) if b not in names]
    Rm = FreeModule(tuple(names), m.params, name="R")
    Qm = FreeModule(tuple(m.basis[i] for i in order[len(names):]), m.params, name="Q")
    E = FreeModule(Rm.basis + Qm.basis, m.params)
    entries = {(a, b): [t.entries[order[a]][order[b]][order[k]] for k in range(len(order))]
               for a in range(len(order)) for b in range(len(order))}
    try:
        d = extract_datum(ProductAlgebra(LambdaTable(E, E, E, entries), Rm, Qm))
    except DatumError as exc:
        print(f"extract-datum: {exc}")
        return FAIL
    sys.stdout.write(dumps(datum_json(d)))
    return OK


def cmd_check_crossed(args) -> int:
    df = _datum(args.file, args)
    try:
        report = check_crossed(df.datum)
    except DatumError as exc:
        print(f"crossed: {exc}")
        return FAIL
    return _emit_report("crossed", report, args)


def cmd_check_bicrossed(args) -> int:
    df = _datum(args.file, args)
    try:
        report = check_bicrossed(df.datum)
    except DatumError as exc:
        print(f"bicrossed: {exc}")
        return FAIL
    return _emit_report("bicrossed", report, args)


def _flag(df: DatumFile):
    try:
        return df.as_flag()
    except ModuleMismatch as exc:
        raise UsageError(str(exc)) from None


def cmd_check_flag(args) -> int:
    fd = _flag(_datum(args.file, args))
    report = check_flag(fd)
    extra = {"family": check_dflc_membership(fd).tag}
    return _emit_report("flag", report, args, extra)


def cmd_build_flag(args) -> int:
    fd = _flag(_datum(args.file, args))
    try:
        P = build_flag_extension(fd)
    except DatumError as exc:
        return _emit_report("flag", exc.report, args)
    _print_algebra(P.table, "flag extension", args)
    return OK


def cmd_equiv(args) -> int:
    fd1 = _flag(_datum(args.first, args))
    fd2 = _flag(_datum(args.second, args))
    if fd1.R != fd2.R or fd1.R.entries != fd2.R.entries:
        raise UsageError("the two datums are over different algebras")
    m = fd1.Rm
    if args.omega is not None:
        params = fd1.params() | fd2.params()
        omega = m.element(parse_linear(args.omega, m.basis, params))
        beta = _rational(args.beta) if args.beta is not None else Fraction(1)
        if beta == 0:
            raise UsageError("--beta must be nonzero")
        w = EquivWitness(omega, beta)
        return _emit_report("equivalence", check_equiv(fd1, fd2, w), args, {"witness": str(w)})
    betas = [_rational(b) for b in args.betas.split(",")] if args.betas else list(DEFAULT_BETAS)
    if not betas or any(b == 0 for b in betas):
        raise UsageError("--betas must list nonzero rationals")
    res = search_equiv(fd1, fd2, args.deg, betas)
    if args.json:
        sys.stdout.write(dumps({
            "command": "equiv",
            "status": res.status,
            "witness": None if res.witness is None else {
                "omega": str(res.witness.omega), "beta": str(res.witness.beta)},
            "notes": res.notes,
        }))
    else:
        print(f"equiv: {res.status}")
        if res.witness is not None:
            print(f"  {res.witness}")
        for note in res.notes:
            print(f"  note: {note}")
    return OK if res.found else FAIL


def cmd_solve_derivations(args) -> int:
    af, t = _algebra(args)
    space = solve_derivations(t, args.deg)
    m = t.left
    if args.json:
        sys.stdout.write(dumps({
            "command": "solve-derivations",
            "bound": args.deg,
            "dimension": space.dimension,
            "basis": [{b: str(op.value(i)) for i, b in enumerate(m.basis)} for op in space.basis_ops],
        }))
    else:
        print(f"dimension {space.dimension}")
        for n, op in enumerate(space.basis_ops, 1):
            vals = ", ".join(f"D_lam {b} = {op.value(i)}" for i, b in enumerate(m.basis))
            print(f"  [{n}] {vals}")
    return OK


def cmd_inner_witness(args) -> int:
    af, t = _algebra(args)
    T = _operator(args.map, t.left, af.params)
    b = solve_inner_witness(t, T, args.deg)
    if args.json:
        sys.stdout.write(dumps({"command": "inner-witness", "bound": args.deg,
                                "witness": None if b is None else str(b)}))
    else:
        print("none-within-bound" if b is None else f"witness b = {b}")
    return FAIL if b is None else OK


def cmd_check_centroid(args) -> int:
    af, t = _algebra(args)
    T = _operator(args.map, t.left, af.params)
    return _emit_report("semi-quasicentroid", check_semiquasicentroid(t, T), args)


def _numeric(obj) -> bool:
    return not obj.params()


def cmd_report(args) -> int:
    obj = load(args.file)
    binds = _bindings(args.bind)
    lines: List[str] = []
    data: dict = {"command": "report"}
    ok = True
    if isinstance(obj, AlgebraFile):
        if obj.table is None:
            raise UsageError("report needs an algebra with a table")
        t = _apply_bindings(obj.table, obj.params, obj.bindings, binds)
        ls = check_lsca(t)
        ok = ls.passed
        data["left-symmetry"] = ls.to_dict()
        lines.append(f"left-symmetry: {'passed' if ls.passed else 'failed'}")
        lines.extend(f"  {s}" for s in ls.lines())
        if ls.passed:
            lie = check_lie(subadjacent(t))
            data["sub-adjacent lie"] = lie.to_dict()
            lines.append(f"sub-adjacent lie: {'passed' if lie.passed else 'failed'}")
            if _numeric(t):
                dim = solve_derivations(t, args.deg).dimension
                data["derivations"] = {"bound": args.deg, "dimension": dim}
                lines.append(f"derivations (bound {args.deg}): dimension {dim}")
            else:
                lines.append("derivations: skipped (bind parameters to solve)")
    else:
        df = obj
        df.datum = _apply_bindings(df.datum, df.params, df.bindings, binds)
        d = df.datum
        es = check_extending_structure(d)
        ok = es.passed
        data["extending-structure"] = es.to_dict()
        lines.append(f"extending structure: {'passed' if es.passed else 'failed'}")
        lines.extend(f"  {s}" for s in es.lines())
        kinds = []
        if d.l.is_zero() and d.r.is_zero():
            kinds.append(("crossed", check_crossed(d)))
        if d.g.is_zero():
            kinds.append(("bicrossed", check_bicrossed(d)))
        for name, rep in kinds:
            data[name] = rep.to_dict()
            lines.append(f"{name}: {'passed' if rep.passed else 'failed'}")
        if d.Q.rank == 1:
            from .flagdatum import datum_to_flag

            fd = datum_to_flag(d)
            fl = check_flag(fd)
            data["flag"] = fl.to_dict()
            data["family"] = check_dflc_membership(fd).tag
            lines.append(f"flag conditions: {'passed' if fl.passed else 'failed'}")
            lines.append(f"family: {data['family']}")
        if es.passed:
            lie = check_lie(subadjacent(build_unified(d).table))
            data["sub-adjacent lie"] = lie.to_dict()
            lines.append(f"sub-adjacent lie of the product: {'passed' if lie.passed else 'failed'}")
    if args.json:
        sys.stdout.write(dumps(data))
    else:
        print("\n".join(lines))
    return OK if ok else FAIL


# ---- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conformal-workbench", description="Exact checks for left-symmetric conformal algebras.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_, file_help="algebra JSON file"):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help=file_help)
        sp.add_argument("--bind", action="append", metavar="NAME=Q", help="fix a parameter to a rational")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    add("check", cmd_check, "check left-symmetry")
    add("check-lie", cmd_check_lie, "check skew-symmetry and Jacobi")
    add("subadjacent", cmd_subadjacent, "print the commutator bracket")
    add("check-datum", cmd_check_datum, "check LC1-LC10", "datum JSON file")
    add("build-unified", cmd_build_unified, "assemble the unified product", "datum JSON file")
    sp = add("extract-datum", cmd_extract_datum, "read a datum off a product")
    sp.add_argument("--r-basis", required=True, metavar="NAMES", help="comma-separated basis of the subalgebra R")
    add("check-crossed", cmd_check_crossed, "check a crossed product", "datum JSON file")
    add("check-bicrossed", cmd_check_bicrossed, "check a bicrossed product", "datum JSON file")
    add("check-flag", cmd_check_flag, "check lfd1-lfd10", "datum JSON file with rank-one Q")
    add("build-flag", cmd_build_flag, "assemble the rank-one extension", "datum JSON file with rank-one Q")

    sp = sub.add_parser("equiv", help="verify or search an equivalence witness")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--omega", help="witness element of R, e.g. \"x\" or \"(-d)*L + 2*W\"")
    sp.add_argument("--beta", help="nonzero rational (default 1)")
    sp.add_argument("--betas", help="comma-separated candidates for the search")
    sp.add_argument("--deg", type=int, default=DEFAULT_BOUND, help="d-degree bound on omega")
    sp.add_argument("--bind", action="append", metavar="NAME=Q")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_equiv)

    sp = add("solve-derivations", cmd_solve_derivations, "bounded-degree conformal derivations")
    sp.add_argument("--deg", type=int, default=DEFAULT_BOUND)
    for name, fn, help_ in (
        ("inner-witness", cmd_inner_witness, "find b with T = T^b"),
        ("check-centroid", cmd_check_centroid, "check a semi-quasicentroid"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--map", action="append", metavar="BASIS=EXPR", help="T_lam on a basis vector")
        sp.add_argument("--deg", type=int, default=DEFAULT_BOUND)
    sp = add("report", cmd_report, "summary of an algebra or datum file", "algebra or datum JSON file")
    sp.add_argument("--deg", type=int, default=DEFAULT_BOUND)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if getattr(args, "deg", 0) is not None and getattr(args, "deg", 0) < 0:
        print("error: --deg must be non-negative", file=sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except (UsageError, SchemaError, ParseError, SymbolicParameters, ModuleMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

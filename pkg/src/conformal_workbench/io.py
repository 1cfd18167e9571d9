"""JSON files for algebras and datums.

Algebra file::

    {"name": "Rc", "params": ["c"], "basis": ["x"],
     "table": {"(1,1)": ["(d+lam+c)*x"]}}

``params`` entries are names or ``{"name": "c", "value": "1"}``.  Table keys
are 1-based ``"(i,j)"`` (basis names are accepted too); each value is a
string or a list of strings that are summed.  Omitted pairs are zero.

Datum file::

    {"R": "rc.json" | {...algebra...},
     "Q": "q.json" | {...algebra...} | {"basis": ["y"]},
     "params": [...],
     "tables": {"phi": {...}, "psi": {...}, "l": {...}, "r": {...},
                "g": {...}, "circ": {...}}}

or, for a rank-one Q, a ``"flag"`` section instead of ``"tables"``::

    "flag": {"h": {"x": "lam+d"}, "k": {}, "D": {"x": "(lam+d)*x"},
             "T": {}, "M": "0", "P": "lam+d"}

Relative paths are resolved against the datum file's directory.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .core import CONFORMAL, LEFT_CONFORMAL, Element, FreeModule, LambdaTable, OperatorTable
from .flagdatum import FlagDatum, datum_to_flag, flag_to_datum
from .parsing import ParseError, UndeclaredIdentifier, parse_linear, poly_parse
from .polyring import RESERVED, ZERO, Poly
from .products import TABLES, ExtendingDatum


class SchemaError(ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass
class AlgebraFile:
    name: str
    params: List[str]
    bindings: Dict[str, Fraction]
    module: FreeModule
    table: Optional[LambdaTable]  # None for a bare module

    @property
    def is_bare(self) -> bool:
        return self.table is None


@dataclass
class DatumFile:
    R: AlgebraFile
    Q: AlgebraFile
    params: List[str]
    bindings: Dict[str, Fraction]
    datum: ExtendingDatum
    flag: Optional[FlagDatum] = None

    def as_flag(self) -> FlagDatum:
        if self.flag is not None:
            return self.flag
        return datum_to_flag(self.datum)


_KEY = re.compile(r"^\(\s*([^,\s()]+)\s*,\s*([^,\s()]+)\s*\)$")


def _read_json(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(str(path), f"cannot read file ({exc.strerror})") from None
    except UnicodeDecodeError:
        raise SchemaError(str(path), "file is not valid UTF-8") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _rational(v, where: str) -> Fraction:
    try:
        return Fraction(str(v).strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(where, f"not a rational number: {v!r}") from None


def _params(raw, where: str):
    if raw is None:
        return [], {}
    if not isinstance(raw, list):
        raise SchemaError(where, "must be a list")
    names, bindings = [], {}
    for i, item in enumerate(raw):
        w = f"{where}[{i}]"
        if isinstance(item, str):
            name = item
        elif isinstance(item, dict) and isinstance(item.get("name"), str):
            name = item["name"]
            if item.get("value") is not None:
                bindings[name] = _rational(item["value"], f"{w}.value")
        else:
            raise SchemaError(w, "parameter must be a name or {name, value}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise SchemaError(w, f"bad parameter name {name!r}")
        if name in RESERVED:
            raise SchemaError(w, f"{name!r} is reserved")
        names.append(name)
    return names, bindings


def _parse(fn, src, where: str, *args):
    if not isinstance(src, str):
        raise SchemaError(where, "expected an expression string")
    try:
        return fn(src, *args)
    except UndeclaredIdentifier as exc:
        raise SchemaError(where, str(exc)) from None
    except ParseError as exc:
        raise SchemaError(where, str(exc)) from None


def _vector(raw, basis: Sequence[str], params, where: str) -> List[Poly]:
    items = raw if isinstance(raw, list) else [raw]
    total = [ZERO] * len(basis)
    for n, src in enumerate(items):
        vec = _parse(parse_linear, src, f"{where}[{n}]" if isinstance(raw, list) else where, basis, params)
        total = [a + b for a, b in zip(total, vec)]
    return total


def _index(tok: str, basis: Sequence[str], where: str) -> int:
    if tok in basis:
        return basis.index(tok)
    if tok.isdigit() and 1 <= int(tok) <= len(basis):
        return int(tok) - 1
    raise SchemaError(where, f"index {tok!r} out of range")


def _table(raw, left: FreeModule, right: FreeModule, target: FreeModule, params, where: str) -> LambdaTable:
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise SchemaError(where, "must be an object keyed by \"(i,j)\"")
    entries = {}
    for key, val in raw.items():
        w = f"{where}.{key}"
        m = _KEY.match(key)
        if not m:
            raise SchemaError(w, "key must look like \"(i,j)\"")
        i = _index(m.group(1), left.basis, w)
        j = _index(m.group(2), right.basis, w)
        entries[(i, j)] = _vector(val, target.basis, params, w)
    try:
        return LambdaTable(left, right, target, entries)
    except ValueError as exc:
        raise SchemaError(where, str(exc)) from None


def _basis(raw, where: str) -> List[str]:
    if not isinstance(raw, list) or not all(isinstance(b, str) for b in raw):
        raise SchemaError(where, "must be a list of names")
    for b in raw:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", b) or b in RESERVED:
            raise SchemaError(where, f"bad basis name {b!r}")
    if len(set(raw)) != len(raw):
        raise SchemaError(where, "basis names must be distinct")
    return list(raw)


def parse_algebra(obj, where: str = "", extra_params: Sequence[str] = (), bare_ok: bool = False) -> AlgebraFile:
    if not isinstance(obj, dict):
        raise SchemaError(where, "algebra must be a JSON object")
    unknown = set(obj) - {"name", "params", "basis", "table"}
    if unknown:
        raise SchemaError(where, f"unknown keys {sorted(unknown)}")
    pre = f"{where}." if where else ""
    if "basis" not in obj:
        raise SchemaError(where, "missing key 'basis'")
    basis = _basis(obj["basis"], pre + "basis")
    names, bindings = _params(obj.get("params"), pre + "params")
    params = list(dict.fromkeys(list(extra_params) + names))
    module = FreeModule(tuple(basis), frozenset(params), name=str(obj.get("name", "")))
    if "table" not in obj and bare_ok:
        table = None
    else:
        table = _table(obj.get("table"), module, module, module, params, pre + "table")
    return AlgebraFile(str(obj.get("name", "")), params, bindings, module, table)


def load_algebra(path: Union[str, Path]) -> AlgebraFile:
    path = Path(path)
    obj = _read_json(path)
    if isinstance(obj, dict) and ("tables" in obj or "flag" in obj):
        raise SchemaError(str(path), "this is a datum file, not an algebra file")
    return parse_algebra(obj, "")


def _sub_algebra(raw, base: Path, where: str, params, bare_ok: bool) -> AlgebraFile:
    if isinstance(raw, str):
        p = (base / raw) if not Path(raw).is_absolute() else Path(raw)
        return parse_algebra(_read_json(p), where, params, bare_ok)
    return parse_algebra(raw, where, params, bare_ok)


def _operator_values(raw, R: FreeModule, params, where: str, functional: bool):
    if raw is None:
        raw = {}
    if isinstance(raw, list):
        if len(raw) != R.rank:
            raise SchemaError(where, f"expected {R.rank} values")
        raw = dict(zip(R.basis, raw))
    if not isinstance(raw, dict):
        raise SchemaError(where, "must map basis names to expressions")
    vals = [None] * R.rank
    for key, src in raw.items():
        w = f"{where}.{key}"
        i = _index(key, R.basis, w)
        if functional:
            vals[i] = _parse(poly_parse, src, w, params)
        else:
            vals[i] = _vector(src, R.basis, params, w)
    return vals


def parse_datum(obj, base: Path = Path("."), where: str = "") -> DatumFile:
    if not isinstance(obj, dict):
        raise SchemaError(where, "datum must be a JSON object")
    unknown = set(obj) - {"R", "Q", "params", "tables", "flag", "name"}
    if unknown:
        raise SchemaError(where, f"unknown keys {sorted(unknown)}")
    if "R" not in obj:
        raise SchemaError(where, "missing key 'R'")
    names, bindings = _params(obj.get("params"), "params")
    Rf = _sub_algebra(obj["R"], base, "R", names, False)
    params = list(dict.fromkeys(Rf.params + names))
    bindings = {**Rf.bindings, **bindings}
    if "tables" in obj and "flag" in obj:
        raise SchemaError(where, "give either 'tables' or 'flag', not both")
    if "flag" in obj:
        Qraw = obj.get("Q", {"basis": ["x" if "x" not in Rf.module.basis else "y"]})
        Qf = _sub_algebra(Qraw, base, "Q", params, True)
        if Qf.module.rank != 1:
            raise SchemaError("Q", "a flag datum needs a rank-one Q")
        fl = obj["flag"]
        if not isinstance(fl, dict):
            raise SchemaError("flag", "must be an object")
        bad = set(fl) - {"h", "k", "D", "T", "M", "P"}
        if bad:
            raise SchemaError("flag", f"unknown keys {sorted(bad)}")
        R = Rf.module
        fd = FlagDatum.build(
            Rf.table,
            h=_operator_values(fl.get("h"), R, params, "flag.h", True),
            k=_operator_values(fl.get("k"), R, params, "flag.k", True),
            D=_operator_values(fl.get("D"), R, params, "flag.D", False),
            T=_operator_values(fl.get("T"), R, params, "flag.T", False),
            M=_vector(fl.get("M", "0"), R.basis, params, "flag.M"),
            P=_parse(poly_parse, fl.get("P", "0"), "flag.P", params),
            x=Qf.module.basis[0],
        )
        return DatumFile(Rf, Qf, params, bindings, flag_to_datum(fd), fd)
    if "Q" not in obj:
        raise SchemaError(where, "missing key 'Q'")
    Qf = _sub_algebra(obj["Q"], base, "Q", params, True)
    params = list(dict.fromkeys(params + Qf.params))
    bindings = {**Qf.bindings, **bindings}
    R, Q = Rf.module, Qf.module
    if set(R.basis) & set(Q.basis):
        raise SchemaError("Q.basis", "R and Q basis names must be disjoint")
    raw = obj.get("tables", {})
    if not isinstance(raw, dict):
        raise SchemaError("tables", "must be an object")
    bad = set(raw) - set(TABLES)
    if bad:
        raise SchemaError("tables", f"unknown tables {sorted(bad)}")
    shapes = {"phi": (Q, R, R), "psi": (Q, R, R), "l": (R, Q, Q), "r": (R, Q, Q), "g": (Q, Q, R), "circ": (Q, Q, Q)}
    tables = {}
    for name, shape in shapes.items():
        if name in raw:
            tables[name] = _table(raw[name], *shape, params, f"tables.{name}")
    if "circ" not in raw and Qf.table is not None:
        tables["circ"] = LambdaTable(Q, Q, Q, Qf.table.entries)
    datum = ExtendingDatum.build(Rf.table, Q, **tables)
    return DatumFile(Rf, Qf, params, bindings, datum)


def load_datum(path: Union[str, Path]) -> DatumFile:
    path = Path(path)
    obj = _read_json(path)
    return parse_datum(obj, path.parent)


def load(path: Union[str, Path]) -> Union[AlgebraFile, DatumFile]:
    path = Path(path)
    obj = _read_json(path)
    if isinstance(obj, dict) and ("tables" in obj or "flag" in obj or "R" in obj):
        return parse_datum(obj, path.parent)
    return parse_algebra(obj, "")


# ---- printing --------------------------------------------------------------------


def _vec_str(coeffs: Sequence[Poly], basis: Sequence[str]) -> List[str]:
    from .parsing import format_linear

    return [format_linear(coeffs, basis)]


def table_json(t: LambdaTable) -> Dict[str, List[str]]:
    out = {}
    for i in range(t.left.rank):
        for j in range(t.right.rank):
            vec = t.entries[i][j]
            if any(not c.is_zero() for c in vec):
                out[f"({i + 1},{j + 1})"] = _vec_str(vec, t.target.basis)
    return out


def algebra_json(t: LambdaTable, name: str = "", params: Sequence[str] = ()) -> dict:
    used = sorted(set(params) | set(t.params()))
    obj = {"name": name, "basis": list(t.left.basis), "table": table_json(t)}
    if used:
        obj = {"name": name, "params": used, "basis": list(t.left.basis), "table": table_json(t)}
    return obj


def datum_json(d: ExtendingDatum, params: Sequence[str] = ()) -> dict:
    used = sorted(set(params) | set(d.params()))
    obj = {
        "R": algebra_json(d.R, d.Rm.name or "R"),
        "Q": {"name": d.Q.name or "Q", "basis": list(d.Q.basis)},
    }
    if used:
        obj["params"] = used
    obj["tables"] = {name: table_json(getattr(d, name)) for name in TABLES if not getattr(d, name).is_zero()}
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"

"""Extending data over a pair (R, Q), unified products and their special cases.

Table conventions (all are conformal bilinear maps stored on basis pairs):

* ``phi``, ``psi``: Q x R -> R, entry ``[x][a]`` is ``phi(x)_lam a``;
* ``l``, ``r``: R x Q -> Q, entry ``[a][x]`` is ``l(a)_lam x``;
* ``g``: Q x Q -> R and ``circ``: Q x Q -> Q.

The unified product on R + Q is

    (a+x)_lam(b+y) = a_lam b + phi(x)_lam b + psi(y)_{-lam-d} a + g_lam(x,y)
                     + x circ_lam y + l(a)_lam y + r(b)_{-lam-d} x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from .axioms import (
    CheckReport,
    SkewArg,
    _idx,
    check_bimodule,
    check_lsca,
    commutator_table,
    register_law,
    run_checks,
)
from .core import Element, FreeModule, LambdaTable, ModuleMismatch
from .polyring import D, LAM, MU, Poly

S_LM = -LAM - MU - D  # -lam-mu-d
S_M = -MU - D  # -mu-d

TABLES = ("phi", "psi", "l", "r", "g", "circ")


class DatumError(ValueError):
    def __init__(self, message: str, report: CheckReport | None = None):
        self.report = report
        super().__init__(message)


def _involute(p: Poly) -> Poly:
    """lam -> -lam-d, the substitution behind every ``_{-lam-d}`` subscript."""
    return p.subs({"lam": SkewArg})


@dataclass(frozen=True)
class ExtendingDatum:
    R: LambdaTable
    Q: FreeModule
    phi: LambdaTable
    psi: LambdaTable
    l: LambdaTable
    r: LambdaTable
    g: LambdaTable
    circ: LambdaTable

    def __post_init__(self):
        Rm, Q = self.R.left, self.Q
        if not self.R.square:
            raise ModuleMismatch("R must be a square table")
        if set(Rm.basis) & set(Q.basis):
            raise ModuleMismatch("R and Q basis names must be disjoint")
        want = {
            "phi": (Q, Rm, Rm),
            "psi": (Q, Rm, Rm),
            "l": (Rm, Q, Q),
            "r": (Rm, Q, Q),
            "g": (Q, Q, Rm),
            "circ": (Q, Q, Q),
        }
        for name, shape in want.items():
            t = getattr(self, name)
            if (t.left, t.right, t.target) != shape:
                raise ModuleMismatch(f"table {name} has the wrong shape")

    @property
    def Rm(self) -> FreeModule:
        return self.R.left

    @classmethod
    def build(cls, R: LambdaTable, Q: FreeModule, **tables) -> "ExtendingDatum":
        """Missing tables are zero."""
        unknown = set(tables) - set(TABLES)
        if unknown:
            raise TypeError(f"unknown tables: {sorted(unknown)}")
        Rm = R.left
        shapes = {
            "phi": (Q, Rm, Rm),
            "psi": (Q, Rm, Rm),
            "l": (Rm, Q, Q),
            "r": (Rm, Q, Q),
            "g": (Q, Q, Rm),
            "circ": (Q, Q, Q),
        }
        full = {}
        for name in TABLES:
            t = tables.get(name)
            if t is None:
                t = LambdaTable.zero(*shapes[name])
            elif not isinstance(t, LambdaTable):
                t = LambdaTable(*shapes[name], t)
            full[name] = t
        return cls(R, Q, **full)

    def tables(self) -> Dict[str, LambdaTable]:
        return {name: getattr(self, name) for name in TABLES}

    def params(self) -> frozenset:
        out = self.R.params()
        for t in self.tables().values():
            out |= t.params()
        return out

    def assign(self, bindings) -> "ExtendingDatum":
        return ExtendingDatum(self.R.assign(bindings), self.Q, **{k: t.assign(bindings) for k, t in self.tables().items()})

    def same_tables(self, other: "ExtendingDatum") -> bool:
        return self.R == other.R and self.Q == other.Q and all(
            getattr(self, n) == getattr(other, n) for n in TABLES
        )


@dataclass(frozen=True)
class ProductAlgebra:
    """A table on R + Q with R's basis first."""

    table: LambdaTable
    R: FreeModule
    Q: FreeModule

    @property
    def E(self) -> FreeModule:
        return self.table.left

    def split(self, v: Element) -> Tuple[Element, Element]:
        n = self.R.rank
        return Element(self.R, v.coeffs[:n]), Element(self.Q, v.coeffs[n:])

    def block(self, i: int, j: int) -> Tuple[Element, Element]:
        return self.split(self.table.entry(i, j))


def sum_module(R: FreeModule, Q: FreeModule) -> FreeModule:
    if set(R.basis) & set(Q.basis):
        raise ModuleMismatch("R and Q basis names must be disjoint")
    return FreeModule(R.basis + Q.basis, R.params | Q.params, name=f"{R.name}+{Q.name}")


def build_unified_unchecked(d: ExtendingDatum) -> ProductAlgebra:
    Rm, Q = d.Rm, d.Q
    E = sum_module(Rm, Q)
    n = Rm.rank
    entries = {}
    for i in range(n):
        for j in range(n):
            entries[(i, j)] = d.R.entries[i][j] + (Poly.const(0),) * Q.rank
    for i in range(n):
        for k in range(Q.rank):
            # a_lam y = psi(y)_{-lam-d} a + l(a)_lam y
            r_part = tuple(_involute(c) for c in d.psi.entries[k][i])
            entries[(i, n + k)] = r_part + d.l.entries[i][k]
            # x_lam b = phi(x)_lam b + r(b)_{-lam-d} x
            q_part = tuple(_involute(c) for c in d.r.entries[i][k])
            entries[(n + k, i)] = d.phi.entries[k][i] + q_part
    for j in range(Q.rank):
        for k in range(Q.rank):
            entries[(n + j, n + k)] = d.g.entries[j][k] + d.circ.entries[j][k]
    return ProductAlgebra(LambdaTable(E, E, E, entries), Rm, Q)


def build_unified(d: ExtendingDatum) -> ProductAlgebra:
    report = check_extending_structure(d)
    if not report.passed:
        raise DatumError("datum is not an extending structure", report)
    return build_unified_unchecked(d)


def direct_sum(R: LambdaTable, Qt: LambdaTable) -> ProductAlgebra:
    return build_unified_unchecked(ExtendingDatum.build(R, Qt.left, circ=Qt))


def extract_datum(P: ProductAlgebra) -> ExtendingDatum:
    """Read the six tables off a product whose R block is closed."""
    Rm, Q, t = P.R, P.Q, P.table
    n = Rm.rank
    R_entries = {}
    for i in range(n):
        for j in range(n):
            rp, qp = P.block(i, j)
            if not qp.is_zero():
                raise DatumError(
                    f"R is not a subalgebra: {Rm.basis[i]}_lam {Rm.basis[j]} has Q-part {qp}"
                )
            R_entries[(i, j)] = rp.coeffs
    R = LambdaTable(Rm, Rm, Rm, R_entries)
    phi, psi, l, r, g, circ = {}, {}, {}, {}, {}, {}
    for i in range(n):
        for k in range(Q.rank):
            rp, qp = P.block(i, n + k)
            psi[(k, i)] = [_involute(c) for c in rp.coeffs]
            l[(i, k)] = qp.coeffs
            rp, qp = P.block(n + k, i)
            phi[(k, i)] = rp.coeffs
            r[(i, k)] = [_involute(c) for c in qp.coeffs]
    for j in range(Q.rank):
        for k in range(Q.rank):
            rp, qp = P.block(n + j, n + k)
            g[(j, k)] = rp.coeffs
            circ[(j, k)] = qp.coeffs
    return ExtendingDatum.build(R, Q, phi=phi, psi=psi, l=l, r=r, g=g, circ=circ)


# ---- the ten compatibility conditions -----------------------------------------------


class _Ops:
    """Short names for the datum's maps on general elements."""

    def __init__(self, d: ExtendingDatum):
        self.d = d
        self.rr = d.R.product

    def phi(self, x, a, s):
        return self.d.phi.product(x, a, s)

    def psi(self, x, a, s):
        return self.d.psi.product(x, a, s)

    def l(self, a, x, s):
        return self.d.l.product(a, x, s)

    def r(self, a, x, s):
        return self.d.r.product(a, x, s)

    def g(self, x, y, s):
        return self.d.g.product(x, y, s)

    def circ(self, x, y, s):
        return self.d.circ.product(x, y, s)


def lc1(o: _Ops, x, a, b):
    lhs = o.rr(o.phi(x, a, LAM) - o.psi(x, a, LAM), b, LAM + MU) + o.phi(o.r(a, x, MU) - o.l(a, x, MU), b, LAM + MU)
    rhs = o.phi(x, o.rr(a, b, MU), LAM) - o.rr(a, o.phi(x, b, LAM), MU) - o.psi(o.r(b, x, SkewArg), a, S_M)
    return lhs - rhs


def lc2(o: _Ops, x, a, b):
    lhs = o.r(b, o.r(a, x, MU) - o.l(a, x, MU), S_LM)
    rhs = o.r(o.rr(a, b, MU), x, SkewArg) - o.l(a, o.r(b, x, SkewArg), MU)
    return lhs - rhs


def lc3(o: _Ops, a, b, x):
    lhs = o.psi(x, o.rr(a, b, LAM) - o.rr(b, a, MU), S_LM)
    rhs = (
        o.rr(a, o.psi(x, b, S_M), LAM)
        - o.rr(b, o.psi(x, a, SkewArg), MU)
        + o.psi(o.l(b, x, MU), a, SkewArg)
        - o.psi(o.l(a, x, LAM), b, S_M)
    )
    return lhs - rhs


def lc4(o: _Ops, a, b, x):
    lhs = o.l(o.rr(a, b, LAM), x, LAM + MU) - o.l(o.rr(b, a, MU), x, LAM + MU)
    rhs = o.l(a, o.l(b, x, MU), LAM) - o.l(b, o.l(a, x, LAM), MU)
    return lhs - rhs


def lc5(o: _Ops, a, x, y):
    lhs = (
        o.psi(y, o.psi(x, a, MU) - o.phi(x, a, MU), S_LM)
        + o.g(o.l(a, x, LAM), y, LAM + MU)
        - o.rr(a, o.g(x, y, MU), LAM)
        - o.psi(o.circ(x, y, MU), a, SkewArg)
    )
    rhs = o.g(o.r(a, x, S_M), y, LAM + MU) - o.phi(x, o.psi(y, a, SkewArg), MU) - o.g(x, o.l(a, y, LAM), MU)
    return lhs - rhs


def lc6(o: _Ops, a, x, y):
    lhs = o.circ(o.l(a, x, LAM), y, LAM + MU) + o.l(o.psi(x, a, SkewArg), y, LAM + MU) - o.l(a, o.circ(x, y, MU), LAM)
    rhs = (
        o.l(o.phi(x, a, MU), y, LAM + MU)
        + o.circ(o.r(a, x, S_M), y, LAM + MU)
        - o.r(o.psi(y, a, SkewArg), x, S_M)
        - o.circ(x, o.l(a, y, LAM), MU)
    )
    return lhs - rhs


def lc7(o: _Ops, x, y, a):
    lhs = o.rr(o.g(x, y, LAM) - o.g(y, x, MU), a, LAM + MU) + o.phi(o.circ(x, y, LAM) - o.circ(y, x, MU), a, LAM + MU)
    rhs = (
        o.phi(x, o.phi(y, a, MU), LAM)
        - o.phi(y, o.phi(x, a, LAM), MU)
        + o.g(x, o.r(a, y, S_M), LAM)
        - o.g(y, o.r(a, x, SkewArg), MU)
    )
    return lhs - rhs


def lc8(o: _Ops, x, y, a):
    lhs = o.r(a, o.circ(x, y, LAM) - o.circ(y, x, MU), S_LM)
    rhs = (
        o.r(o.phi(y, a, MU), x, SkewArg)
        - o.r(o.phi(x, a, LAM), y, S_M)
        + o.circ(x, o.r(a, y, S_M), LAM)
        - o.circ(y, o.r(a, x, SkewArg), MU)
    )
    return lhs - rhs


def lc9(o: _Ops, x, y, z):
    lhs = o.psi(z, o.g(x, y, LAM), S_LM) + o.g(o.circ(x, y, LAM), z, LAM + MU) - o.phi(x, o.g(y, z, MU), LAM) - o.g(x, o.circ(y, z, MU), LAM)
    rhs = o.psi(z, o.g(y, x, MU), S_LM) + o.g(o.circ(y, x, MU), z, LAM + MU) - o.phi(y, o.g(x, z, LAM), MU) - o.g(y, o.circ(x, z, LAM), MU)
    return lhs - rhs


def lc10(o: _Ops, x, y, z):
    lhs = o.l(o.g(x, y, LAM), z, LAM + MU) + o.circ(o.circ(x, y, LAM), z, LAM + MU) - o.r(o.g(y, z, MU), x, SkewArg) - o.circ(x, o.circ(y, z, MU), LAM)
    rhs = o.l(o.g(y, x, MU), z, LAM + MU) + o.circ(o.circ(y, x, MU), z, LAM + MU) - o.r(o.g(x, z, LAM), y, S_M) - o.circ(y, o.circ(x, z, LAM), MU)
    return lhs - rhs


# ---- crossed-product conditions (l = r = 0) ------------------------------------------


def c1(o: _Ops, x, a, b):
    lhs = o.rr(o.phi(x, a, LAM) - o.psi(x, a, S_M), b, LAM + MU)
    rhs = o.phi(x, o.rr(a, b, MU), LAM) - o.rr(a, o.phi(x, b, LAM), MU)
    return lhs - rhs


def c2(o: _Ops, a, b, x):
    lhs = o.psi(x, o.rr(a, b, LAM) - o.rr(b, a, MU), S_LM)
    rhs = o.rr(a, o.psi(x, b, S_M), LAM) - o.rr(b, o.psi(x, a, SkewArg), MU)
    return lhs - rhs


def c3(o: _Ops, a, x, y):
    lhs = o.psi(y, o.psi(x, a, SkewArg) - o.phi(x, a, MU), S_LM) - o.rr(a, o.g(x, y, MU), LAM) - o.psi(o.circ(x, y, MU), a, SkewArg)
    rhs = -o.phi(x, o.psi(y, a, SkewArg), MU)
    return lhs - rhs


def c4(o: _Ops, x, y, a):
    lhs = o.rr(o.g(x, y, LAM) - o.g(y, x, MU), a, LAM + MU) + o.phi(o.circ(x, y, LAM) - o.circ(y, x, MU), a, LAM + MU)
    rhs = o.phi(x, o.phi(y, a, MU), LAM) - o.phi(y, o.phi(x, a, LAM), MU)
    return lhs - rhs


def c5(o: _Ops, x, y, z):
    return lc9(o, x, y, z)


# (name, function, argument kinds) with "R" / "Q" per slot
LC_CONDITIONS: List[Tuple[str, Callable, str]] = [
    ("LC1", lc1, "QRR"),
    ("LC2", lc2, "QRR"),
    ("LC3", lc3, "RRQ"),
    ("LC4", lc4, "RRQ"),
    ("LC5", lc5, "RQQ"),
    ("LC6", lc6, "RQQ"),
    ("LC7", lc7, "QQR"),
    ("LC8", lc8, "QQR"),
    ("LC9", lc9, "QQQ"),
    ("LC10", lc10, "QQQ"),
]

C_CONDITIONS: List[Tuple[str, Callable, str]] = [
    ("C1", c1, "QRR"),
    ("C2", c2, "RRQ"),
    ("C3", c3, "RQQ"),
    ("C4", c4, "QQR"),
    ("C5", c5, "QQQ"),
]

_BY_NAME = {name: (fn, kinds) for name, fn, kinds in LC_CONDITIONS + C_CONDITIONS}


def _module_for(d: ExtendingDatum, kind: str) -> FreeModule:
    return d.Rm if kind == "R" else d.Q


def condition_residual(name: str, d: ExtendingDatum, *indices) -> Element:
    fn, kinds = _BY_NAME[name]
    args = []
    for kind, i in zip(kinds, indices):
        m = _module_for(d, kind)
        args.append(m.gen(_idx(m, i)))
    return fn(_Ops(d), *args)


for _name in _BY_NAME:
    register_law(_name)(lambda d, *idx, _n=_name: condition_residual(_n, d, *idx))


def _condition_tasks(d: ExtendingDatum, conditions) -> list:
    o = _Ops(d)
    tasks = []
    for name, fn, kinds in conditions:
        mods = [_module_for(d, k) for k in kinds]
        for idx in itertools.product(*(range(m.rank) for m in mods)):
            at = tuple(m.basis[i] for m, i in zip(mods, idx))
            args = [m.gen(i) for m, i in zip(mods, idx)]
            tasks.append((name, at, (lambda fn=fn, args=args: fn(o, *args))))
    return tasks


def check_extending_structure(d: ExtendingDatum) -> CheckReport:
    return run_checks(_condition_tasks(d, LC_CONDITIONS))


def check_conditions(d: ExtendingDatum, names) -> CheckReport:
    chosen = [c for c in LC_CONDITIONS + C_CONDITIONS if c[0] in set(names)]
    return run_checks(_condition_tasks(d, chosen))


def _prefixed(report: CheckReport, prefix: str) -> CheckReport:
    from .axioms import Failure

    return CheckReport([Failure(f"{prefix}:{f.law}", f.at, f.residual) for f in report.failures], report.notes)


def check_crossed(d: ExtendingDatum) -> CheckReport:
    if not (d.l.is_zero() and d.r.is_zero()):
        raise DatumError("a crossed product needs l = r = 0")
    report = _prefixed(check_lsca(d.circ), "Q")
    return report.extend(run_checks(_condition_tasks(d, C_CONDITIONS)))


def check_bicrossed(d: ExtendingDatum) -> CheckReport:
    if not d.g.is_zero():
        raise DatumError("a bicrossed product needs g = 0")
    report = _prefixed(check_lsca(d.circ), "Q")
    report.extend(_prefixed(check_bimodule(d.circ, d.phi, d.psi), "R-over-Q"))
    report.extend(_prefixed(check_bimodule(d.R, d.l, d.r), "Q-over-R"))
    chosen = [c for c in LC_CONDITIONS if c[0] in ("LC1", "LC3", "LC6", "LC8")]
    return report.extend(run_checks(_condition_tasks(d, chosen)))


# ---- induced Lie extending structure -------------------------------------------------


@dataclass(frozen=True)
class LieDatum:
    """Lie data (x <| a, x |> a, f, {x y}) over the sub-adjacent algebra of R."""

    gR: LambdaTable
    Q: FreeModule
    left: LambdaTable  # x <|_lam a : Q x R -> Q
    right: LambdaTable  # x |>_lam a : Q x R -> R
    f: LambdaTable  # Q x Q -> R
    bracket: LambdaTable  # Q x Q -> Q

    def tables(self) -> Dict[str, LambdaTable]:
        return {"left": self.left, "right": self.right, "f": self.f, "bracket": self.bracket}


def induced_lie_datum(d: ExtendingDatum, check: bool = True) -> LieDatum:
    if check:
        report = check_extending_structure(d)
        if not report.passed:
            raise DatumError("datum is not an extending structure", report)
    Rm, Q = d.Rm, d.Q
    left, right, f, br = {}, {}, {}, {}
    for k in range(Q.rank):
        for i in range(Rm.rank):
            left[(k, i)] = [_involute(p - q) for p, q in zip(d.r.entries[i][k], d.l.entries[i][k])]
            right[(k, i)] = [p - q for p, q in zip(d.phi.entries[k][i], d.psi.entries[k][i])]
    for j in range(Q.rank):
        for k in range(Q.rank):
            f[(j, k)] = [p - _involute(q) for p, q in zip(d.g.entries[j][k], d.g.entries[k][j])]
            br[(j, k)] = [p - _involute(q) for p, q in zip(d.circ.entries[j][k], d.circ.entries[k][j])]
    return LieDatum(
        commutator_table(d.R),
        Q,
        LambdaTable(Q, Rm, Q, left),
        LambdaTable(Q, Rm, Rm, right),
        LambdaTable(Q, Q, Rm, f),
        LambdaTable(Q, Q, Q, br),
    )


def lie_unified_table(ld: LieDatum) -> LambdaTable:
    """The bracket on R + Q assembled from a Lie datum:

    [(a+x)_lam(b+y)] = ([a_lam b] + x|>_lam b - y|>_{-lam-d} a + f_lam(x,y))
                       + ({x_lam y} + x<|_lam b - y<|_{-lam-d} a).
    """
    Rm, Q = ld.gR.left, ld.Q
    E = sum_module(Rm, Q)
    n = Rm.rank
    zq = (Poly.const(0),) * Q.rank
    entries = {}
    for i in range(n):
        for j in range(n):
            entries[(i, j)] = ld.gR.entries[i][j] + zq
    for i in range(n):
        for k in range(Q.rank):
            entries[(i, n + k)] = tuple(-_involute(c) for c in ld.right.entries[k][i]) + tuple(
                -_involute(c) for c in ld.left.entries[k][i]
            )
            entries[(n + k, i)] = ld.right.entries[k][i] + ld.left.entries[k][i]
    for j in range(Q.rank):
        for k in range(Q.rank):
            entries[(n + j, n + k)] = ld.f.entries[j][k] + ld.bracket.entries[j][k]
    return LambdaTable(E, E, E, entries)


# ---- equivalence witnesses for general Q ------------------------------------------------


@dataclass(frozen=True)
class ModuleMap:
    """A C[d]-linear map given by the images of basis vectors."""

    source: FreeModule
    target: FreeModule
    images: Tuple[Tuple[Poly, ...], ...]

    def __post_init__(self):
        imgs = tuple(tuple(Poly.coerce(c) for c in (im.coeffs if isinstance(im, Element) else im)) for im in self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.source.rank or any(len(v) != self.target.rank for v in imgs):
            raise ModuleMismatch("module map has the wrong shape")

    @classmethod
    def identity(cls, m: FreeModule) -> "ModuleMap":
        return cls(m, m, tuple(g.coeffs for g in m.gens()))

    def __call__(self, v: Element) -> Element:
        if v.module != self.source:
            raise ModuleMismatch("module map applied outside its source")
        out = self.target.zero()
        for c, img in zip(v.coeffs, self.images):
            if not c.is_zero():
                out = out + c * Element(self.target, img)
        return out


def datum_equiv_residuals(d: ExtendingDatum, d2: ExtendingDatum, u: ModuleMap, v: ModuleMap):
    """Yield (law, at, residual) for the six witness identities relating d to d2 via (u, v)."""
    Rm, Q = d.Rm, d.Q
    o, o2 = _Ops(d), _Ops(d2)
    for a in range(Rm.rank):
        ea = Rm.gen(a)
        for k in range(Q.rank):
            x = Q.gen(k)
            at = (Rm.basis[a], Q.basis[k])
            yield "equiv-psi", at, (o.psi(x, ea, SkewArg) + u(o.l(ea, x, LAM))) - (
                d.R.product(ea, u(x), LAM) + o2.psi(v(x), ea, SkewArg)
            )
            yield "equiv-l", at, v(o.l(ea, x, LAM)) - o2.l(ea, v(x), LAM)
            yield "equiv-phi", at, (o.phi(x, ea, LAM) + u(o.r(ea, x, SkewArg))) - (
                d.R.product(u(x), ea, LAM) + o2.phi(v(x), ea, LAM)
            )
            yield "equiv-r", at, v(o.r(ea, x, SkewArg)) - o2.r(ea, v(x), SkewArg)
    for j in range(Q.rank):
        for k in range(Q.rank):
            x, y = Q.gen(j), Q.gen(k)
            at = (Q.basis[j], Q.basis[k])
            yield "equiv-g", at, (o.g(x, y, LAM) + u(o.circ(x, y, LAM))) - (
                d.R.product(u(x), u(y), LAM)
                + o2.phi(v(x), u(y), LAM)
                + o2.psi(v(y), u(x), SkewArg)
                + o2.g(v(x), v(y), LAM)
            )
            yield "equiv-circ", at, v(o.circ(x, y, LAM)) - (
                o2.r(u(y), v(x), SkewArg) + o2.l(u(x), v(y), LAM) + o2.circ(v(x), v(y), LAM)
            )


def check_datum_equiv(d: ExtendingDatum, d2: ExtendingDatum, u: ModuleMap, v: ModuleMap) -> CheckReport:
    """Verify a given witness (u, v); v = identity is the cohomologous case."""
    if d.R != d2.R or d.Q != d2.Q:
        raise ModuleMismatch("datums live over different pairs")
    if u.source != d.Q or u.target != d.Rm or v.source != d.Q or v.target != d.Q:
        raise ModuleMismatch("u must map Q -> R and v must map Q -> Q")
    items = list(datum_equiv_residuals(d, d2, u, v))
    return run_checks([(law, at, (lambda res=res: res)) for law, at, res in items])

"""Identity checkers for left-symmetric and Lie conformal algebras and bimodules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple, Union

from ._parallel import ordered_map
from .core import Element, FreeModule, LambdaTable, ModuleMismatch
from .polyring import D, LAM, MU, Poly

SkewArg = -LAM - D  # the spectral argument -lam-d


@dataclass(frozen=True)
class Failure:
    law: str
    at: Tuple[str, ...]
    residual: Element

    def __str__(self) -> str:
        return f"{self.residual} at ({','.join(self.at)}), law={self.law}"


@dataclass
class CheckReport:
    failures: List[Failure] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def extend(self, other: "CheckReport") -> "CheckReport":
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        return self

    def laws(self) -> List[str]:
        seen = []
        for f in self.failures:
            if f.law not in seen:
                seen.append(f.law)
        return seen

    def lines(self) -> List[str]:
        return [str(f) for f in self.failures]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": [
                {"law": f.law, "at": list(f.at), "residual": str(f.residual)} for f in self.failures
            ],
            "notes": list(self.notes),
        }


def run_checks(tasks: Sequence[Tuple[str, Tuple[str, ...], Callable[[], Element]]]) -> CheckReport:
    """Evaluate residual thunks (possibly in parallel) and collect the nonzero ones."""
    results = ordered_map(lambda t: t[2](), tasks)
    report = CheckReport()
    for (law, at, _), res in zip(tasks, results):
        if not res.is_zero():
            report.failures.append(Failure(law, at, res))
    return report


# ---- residual registry -------------------------------------------------------

_LAWS: Dict[str, Callable] = {}


def register_law(name: str):
    def deco(fn):
        _LAWS[name] = fn
        return fn

    return deco


def known_laws() -> List[str]:
    _load_all()
    return sorted(_LAWS)


def _load_all():
    # the other checker modules register their laws on import
    from . import flagdatum, operators, products  # noqa: F401


def residual(law: str, tables, indices: Sequence) -> Element:
    """LHS minus RHS of a registered identity on the given basis indices.

    ``tables`` is whatever the law acts on: a LambdaTable for the algebra
    laws, an ``(R, l, r)`` triple for bimodule laws, an ExtendingDatum,
    a FlagDatum, and so on.
    """
    _load_all()
    if law not in _LAWS:
        raise KeyError(f"unknown law {law!r}; known: {', '.join(sorted(_LAWS))}")
    return _LAWS[law](tables, *indices)


def _idx(module: FreeModule, i: Union[int, str]) -> int:
    return module.index(i) if isinstance(i, str) else i


# ---- left-symmetric and Lie laws ---------------------------------------------


def lsca_defect(t: LambdaTable, a: Element, b: Element, c: Element) -> Element:
    """(a_lam b)_{lam+mu} c - a_lam (b_mu c) - (b_mu a)_{lam+mu} c + b_mu (a_lam c)."""
    p = t.product
    lhs = p(p(a, b, LAM), c, LAM + MU) - p(a, p(b, c, MU), LAM)
    rhs = p(p(b, a, MU), c, LAM + MU) - p(b, p(a, c, LAM), MU)
    return lhs - rhs


def skew_defect(t: LambdaTable, a: Element, b: Element) -> Element:
    """[a_lam b] + [b_{-lam-d} a]."""
    return t.product(a, b, LAM) + t.product(b, a, SkewArg)


def jacobi_defect(t: LambdaTable, a: Element, b: Element, c: Element) -> Element:
    """[a_lam [b_mu c]] - [[a_lam b]_{lam+mu} c] - [b_mu [a_lam c]]."""
    p = t.product
    return p(a, p(b, c, MU), LAM) - p(p(a, b, LAM), c, LAM + MU) - p(b, p(a, c, LAM), MU)


@register_law("left-symmetry")
def _law_lsca(t: LambdaTable, i, j, k) -> Element:
    m = t.left
    return lsca_defect(t, m.gen(_idx(m, i)), m.gen(_idx(m, j)), m.gen(_idx(m, k)))


@register_law("skew-symmetry")
def _law_skew(t: LambdaTable, i, j) -> Element:
    m = t.left
    return skew_defect(t, m.gen(_idx(m, i)), m.gen(_idx(m, j)))


@register_law("jacobi")
def _law_jacobi(t: LambdaTable, i, j, k) -> Element:
    m = t.left
    return jacobi_defect(t, m.gen(_idx(m, i)), m.gen(_idx(m, j)), m.gen(_idx(m, k)))


def _require_square(t: LambdaTable):
    if not t.square:
        raise ModuleMismatch("the table must map M x M -> M")


def check_lsca(t: LambdaTable) -> CheckReport:
    _require_square(t)
    m = t.left
    names = m.basis
    tasks = [
        ("left-symmetry", (names[i], names[j], names[k]), (lambda i=i, j=j, k=k: _law_lsca(t, i, j, k)))
        for i, j, k in itertools.product(range(m.rank), repeat=3)
    ]
    return run_checks(tasks)


def check_lie(t: LambdaTable) -> CheckReport:
    """Skew-symmetry first; Jacobi is only examined once skew-symmetry holds."""
    _require_square(t)
    m = t.left
    names = m.basis
    skew = run_checks(
        [
            ("skew-symmetry", (names[i], names[j]), (lambda i=i, j=j: _law_skew(t, i, j)))
            for i, j in itertools.product(range(m.rank), repeat=2)
        ]
    )
    if not skew.passed:
        skew.notes.append("jacobi not checked: skew-symmetry fails")
        return skew
    return run_checks(
        [
            ("jacobi", (names[i], names[j], names[k]), (lambda i=i, j=j, k=k: _law_jacobi(t, i, j, k)))
            for i, j, k in itertools.product(range(m.rank), repeat=3)
        ]
    )


class NotAnLSCA(ValueError):
    def __init__(self, report: CheckReport):
        self.report = report
        super().__init__("table is not left-symmetric: " + "; ".join(report.lines()[:3]))


def commutator_table(t: LambdaTable) -> LambdaTable:
    """[a_lam b] = a_lam b - b_{-lam-d} a on basis vectors, without any check."""
    _require_square(t)
    m = t.left
    entries = {}
    for i in range(m.rank):
        for j in range(m.rank):
            v = t.entry(i, j) - t.product(m.gen(j), m.gen(i), SkewArg)
            entries[(i, j)] = v.coeffs
    return LambdaTable(m, m, m, entries)


def subadjacent(t: LambdaTable) -> LambdaTable:
    report = check_lsca(t)
    if not report.passed:
        raise NotAnLSCA(report)
    return commutator_table(t)


# ---- bimodules -----------------------------------------------------------------


def bm1_defect(R: LambdaTable, l: LambdaTable, a: Element, b: Element, v: Element) -> Element:
    p = R.product
    lhs = l.product(p(a, b, LAM), v, LAM + MU) - l.product(a, l.product(b, v, MU), LAM)
    rhs = l.product(p(b, a, MU), v, LAM + MU) - l.product(b, l.product(a, v, LAM), MU)
    return lhs - rhs


def bm2_defect(R: LambdaTable, l: LambdaTable, r: LambdaTable, a: Element, b: Element, v: Element) -> Element:
    s3 = -LAM - MU - D
    s2 = -MU - D
    lhs = r.product(b, l.product(a, v, LAM), s3) - l.product(a, r.product(b, v, s2), LAM)
    rhs = r.product(b, r.product(a, v, s2), s3) - r.product(R.product(a, b, LAM), v, s2)
    return lhs - rhs


def _bimodule_shapes(R: LambdaTable, l: LambdaTable, r: LambdaTable):
    _require_square(R)
    V = l.right
    for t, nm in ((l, "l"), (r, "r")):
        if t.left != R.left or t.right != V or t.target != V:
            raise ModuleMismatch(f"{nm} must be a table R x V -> V")
    return V


@register_law("bm1")
def _law_bm1(tables, i, j, k) -> Element:
    R, l, r = tables
    V = _bimodule_shapes(R, l, r)
    m = R.left
    return bm1_defect(R, l, m.gen(_idx(m, i)), m.gen(_idx(m, j)), V.gen(_idx(V, k)))


@register_law("bm2")
def _law_bm2(tables, i, j, k) -> Element:
    R, l, r = tables
    V = _bimodule_shapes(R, l, r)
    m = R.left
    return bm2_defect(R, l, r, m.gen(_idx(m, i)), m.gen(_idx(m, j)), V.gen(_idx(V, k)))


def check_bimodule(R: LambdaTable, l: LambdaTable, r: LambdaTable) -> CheckReport:
    """Both bimodule identities for left action ``l`` and right action ``r``.

    The right action is stored as ``r(a)_lam v``; the module action it
    encodes is ``v_lam a = r(a)_{-lam-d} v``.
    """
    V = _bimodule_shapes(R, l, r)
    m = R.left
    tasks = []
    for law, fn in (("bm1", _law_bm1), ("bm2", _law_bm2)):
        for i, j, k in itertools.product(range(m.rank), range(m.rank), range(V.rank)):
            at = (m.basis[i], m.basis[j], V.basis[k])
            tasks.append((law, at, (lambda fn=fn, i=i, j=j, k=k: fn((R, l, r), i, j, k))))
    return run_checks(tasks)


def regular_bimodule(R: LambdaTable) -> Tuple[LambdaTable, LambdaTable]:
    """(l, r) of R acting on itself: l(a)_lam v = a_lam v, r(a)_lam v = v_{-lam-d} a."""
    _require_square(R)
    m = R.left
    r_entries = {}
    for i in range(m.rank):
        for j in range(m.rank):
            r_entries[(i, j)] = R.product(m.gen(j), m.gen(i), SkewArg).coeffs
    return R, LambdaTable(m, m, m, r_entries)

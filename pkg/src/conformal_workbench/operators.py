"""Conformal derivations, semi-quasicentroids and their bounded-degree solvers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .axioms import CheckReport, SkewArg, _idx, register_law, run_checks
from .core import (
    CONFORMAL,
    LEFT_CONFORMAL,
    Element,
    FreeModule,
    LambdaTable,
    ModuleMismatch,
    OperatorTable,
)
from .linalg import assign_unknowns, linear_system, nullspace, solve_affine, unknown_names
from .polyring import D, LAM, MU, ONE, ZERO, Poly

DEFAULT_BOUND = 6


class SymbolicParameters(ValueError):
    pass


@dataclass(frozen=True)
class DegreeBound:
    max_total_degree: int = DEFAULT_BOUND

    def __post_init__(self):
        if not isinstance(self.max_total_degree, int) or self.max_total_degree < 0:
            raise ValueError("degree bound must be a non-negative integer")


def _bound(b) -> int:
    if isinstance(b, DegreeBound):
        return b.max_total_degree
    return DegreeBound(b).max_total_degree


@dataclass
class SolutionSpace:
    dimension: int
    basis_ops: List[OperatorTable] = field(default_factory=list)


def require_numeric(*objs) -> None:
    params = set()
    for o in objs:
        if o is None:
            continue
        if isinstance(o, Element):
            params |= {v for v in o.variables() if v not in ("d", "lam", "mu", "nu")}
        else:
            params |= set(o.params())
    if params:
        raise SymbolicParameters(
            f"solvers need numeric parameters; bind {', '.join(sorted(params))} first"
        )


def _shape_operator(R: LambdaTable, op: OperatorTable, variance=CONFORMAL):
    if not R.square:
        raise ModuleMismatch("R must be a square table")
    if op.on != R.left:
        raise ModuleMismatch("operator acts on a different module")
    if variance == CONFORMAL and op.target != R.left:
        raise ModuleMismatch("operator must map R to R")
    if op.variance != variance:
        raise ModuleMismatch(f"operator must be {variance}")


# ---- derivations -----------------------------------------------------------------


def derivation_defect(R: LambdaTable, Dop: OperatorTable, a: Element, b: Element, g: OperatorTable | None = None,
                      verbatim: bool = False) -> Element:
    """D_lam(a)_{lam+mu} b [+ g-term] - D_lam(a_mu b) + a_mu(D_lam b).

    The twisting term is ``g_{-lam-d}(a, -lam-mu) D_{lam+mu}(b)``.  By default
    the left-conformal functional is formed first and its ``d`` then set to
    ``-lam-mu``, which gives ``G_a(mu, -lam-mu)``; ``verbatim=True`` instead
    plugs ``-lam-d`` and ``-lam-mu`` into the two slots in one step.
    """
    p = R.product
    lhs = p(Dop.apply(a, LAM), b, LAM + MU)
    if g is not None:
        if verbatim:
            coef = g.apply(a, SkewArg, second=-LAM - MU)
        else:
            coef = g.apply(a, MU, second=-LAM - MU)
        lhs = lhs + coef * Dop.apply(b, LAM + MU)
    rhs = Dop.apply(p(a, b, MU), LAM) - p(a, Dop.apply(b, LAM), MU)
    return lhs - rhs


@register_law("derivation")
def _law_derivation(tables, i, j) -> Element:
    R, Dop = tables
    m = R.left
    return derivation_defect(R, Dop, m.gen(_idx(m, i)), m.gen(_idx(m, j)))


@register_law("twisted-derivation")
def _law_twisted(tables, i, j) -> Element:
    R, Dop, g = tables
    m = R.left
    return derivation_defect(R, Dop, m.gen(_idx(m, i)), m.gen(_idx(m, j)), g)


def _pair_tasks(R: LambdaTable, law: str, fn):
    m = R.left
    return [
        (law, (m.basis[i], m.basis[j]), (lambda i=i, j=j: fn(m.gen(i), m.gen(j))))
        for i, j in itertools.product(range(m.rank), repeat=2)
    ]


def check_derivation(R: LambdaTable, Dop: OperatorTable) -> CheckReport:
    _shape_operator(R, Dop)
    return run_checks(_pair_tasks(R, "derivation", lambda a, b: derivation_defect(R, Dop, a, b)))


def check_twisted_derivation(R: LambdaTable, Dop: OperatorTable, g: OperatorTable, verbatim: bool = False) -> CheckReport:
    _shape_operator(R, Dop)
    if g.on != R.left or not g.functional or g.variance != LEFT_CONFORMAL:
        raise ModuleMismatch("g must be a left-conformal functional on R")
    return run_checks(
        _pair_tasks(R, "twisted-derivation", lambda a, b: derivation_defect(R, Dop, a, b, g, verbatim))
    )


# ---- semi-quasicentroids -----------------------------------------------------------


def semiquasicentroid_defect(R: LambdaTable, T: OperatorTable, a: Element, b: Element) -> Element:
    """T_{-lam-mu-d}(a_lam b - b_mu a) - a_lam T_{-mu-d}(b) + b_mu T_{-lam-d}(a)."""
    p = R.product
    lhs = T.apply(p(a, b, LAM) - p(b, a, MU), -LAM - MU - D)
    rhs = p(a, T.apply(b, -MU - D), LAM) - p(b, T.apply(a, SkewArg), MU)
    return lhs - rhs


@register_law("semi-quasicentroid")
def _law_sqc(tables, i, j) -> Element:
    R, T = tables
    m = R.left
    return semiquasicentroid_defect(R, T, m.gen(_idx(m, i)), m.gen(_idx(m, j)))


def check_semiquasicentroid(R: LambdaTable, T: OperatorTable) -> CheckReport:
    _shape_operator(R, T)
    return run_checks(_pair_tasks(R, "semi-quasicentroid", lambda a, b: semiquasicentroid_defect(R, T, a, b)))


def inner_operator(R: LambdaTable, b: Element) -> OperatorTable:
    """T^b with T^b_lam(a) = a_{-lam-d} b."""
    m = R.left
    if b.module != m:
        raise ModuleMismatch("b must be an element of R")
    return OperatorTable(m, m, [R.product(e, b, SkewArg) for e in m.gens()], CONFORMAL)


# ---- solvers -------------------------------------------------------------------------


def monomials(bound: int, variables: Sequence[str] = ("lam", "d")) -> List[Poly]:
    """All monomials of total degree <= bound, by degree then lexicographically."""
    out = []
    for deg in range(bound + 1):
        for exps in itertools.product(range(deg + 1), repeat=len(variables)):
            if sum(exps) != deg:
                continue
            p = ONE
            for v, e in zip(variables, exps):
                p = p * Poly.var(v) ** e
            out.append(p)
    return out


def generic_operator(m: FreeModule, bound: int, prefix: str = "__u", variance: str = CONFORMAL,
                     target: FreeModule | None = None) -> Tuple[OperatorTable, List[str]]:
    """Operator whose entries are general polynomials with unknown coefficients."""
    mons = monomials(bound)
    tgt = m if (target is None and variance == CONFORMAL) else target
    count = 0
    names: List[str] = []
    rows = []
    for _ in range(m.rank):
        if tgt is None:
            total = ZERO
            for mono in mons:
                u = f"{prefix}{count}"
                count += 1
                names.append(u)
                total = total + Poly.var(u) * mono
            rows.append(total)
        else:
            vec = []
            for _k in range(tgt.rank):
                total = ZERO
                for mono in mons:
                    u = f"{prefix}{count}"
                    count += 1
                    names.append(u)
                    total = total + Poly.var(u) * mono
                vec.append(total)
            rows.append(vec)
    return OperatorTable(m, tgt, rows, variance), names


def _residual_polys(elements: Sequence[Element]) -> List[Poly]:
    return [c for e in elements for c in e.coeffs if not c.is_zero()]


def _specialize(op: OperatorTable, unknowns: Sequence[str], values: Sequence[Fraction]) -> OperatorTable:
    return op.map_entries(lambda c: assign_unknowns(c, unknowns, values))


def solve_derivations(R: LambdaTable, bound=DEFAULT_BOUND) -> SolutionSpace:
    """Basis of the conformal derivations whose entries have degree <= bound."""
    require_numeric(R)
    n = _bound(bound)
    m = R.left
    if m.rank == 0:
        return SolutionSpace(0, [])
    Dop, unknowns = generic_operator(m, n)
    res = [derivation_defect(R, Dop, a, b) for a in m.gens() for b in m.gens()]
    A, _ = linear_system(_residual_polys(res), unknowns)
    basis = nullspace(A, len(unknowns))
    ops = [_specialize(Dop, unknowns, v) for v in basis]
    return SolutionSpace(len(ops), ops)


def generic_element(m: FreeModule, bound: int, prefix: str = "__w") -> Tuple[Element, List[str]]:
    names = []
    coeffs = []
    for i in range(m.rank):
        total = ZERO
        for j in range(bound + 1):
            u = f"{prefix}{len(names)}"
            names.append(u)
            total = total + Poly.var(u) * D ** j
        coeffs.append(total)
    return Element(m, tuple(coeffs)), names


def solve_inner_witness(R: LambdaTable, T: OperatorTable, bound=DEFAULT_BOUND) -> Optional[Element]:
    """Some b with T = T^b and d-degree of b at most ``bound``, or None."""
    _shape_operator(R, T)
    require_numeric(R, T)
    n = _bound(bound)
    m = R.left
    b, unknowns = generic_element(m, n)
    inner = inner_operator(R, b)
    polys = []
    for i in range(m.rank):
        polys.extend(x - y for x, y in zip(inner.entries[i], T.entries[i]))
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return m.zero()
    A, rhs = linear_system(polys, unknowns)
    sol = solve_affine(A, rhs, len(unknowns))
    if sol is None:
        return None
    values, _ = sol
    return b.subs({u: Poly.const(v) for u, v in zip(unknowns, values)})

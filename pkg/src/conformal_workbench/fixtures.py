"""Small algebras and datums used by the tests, the CLI report and the docs."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from .core import FreeModule, LambdaTable
from .flagdatum import FlagDatum, crossed_flag_family, bicrossed_flag
from .polyring import D, LAM, Poly

X = FreeModule(("x",), name="R")
LW = FreeModule(("L", "W"), name="R")


def rank_one(entry) -> LambdaTable:
    return LambdaTable(X, X, X, {(0, 0): [Poly.coerce(entry)]})


def R0() -> LambdaTable:
    return rank_one(0)


def R1() -> LambdaTable:
    return rank_one(1)


def Rc(c="c") -> LambdaTable:
    """x_lam x = (d + lam + c) x; ``c`` is a rational or a parameter name."""
    cp = Poly.var(c) if isinstance(c, str) else Poly.const(Fraction(c))
    m = FreeModule(("x",), frozenset(cp.variables()), name="R")
    return LambdaTable(m, m, m, {(0, 0): [D + LAM + cp]})


def Bad1() -> LambdaTable:
    return rank_one(LAM)


def BadD() -> LambdaTable:
    return rank_one(D)


def RLW() -> LambdaTable:
    """L_lam L = 0, L_lam W = W_lam L = L, W_lam W = W."""
    return LambdaTable(LW, LW, LW, {(0, 1): [1, 0], (1, 0): [1, 0], (1, 1): [0, 1]})


# (h, k, D, T) of the bicrossed representatives with M = 0 and P = lam + d + xi
Tuple4 = Tuple[Poly, Poly, Poly, Poly]


def bicrossed_representatives(xi, c) -> List[Tuple4]:
    """The listed representatives for numeric (xi, c)."""
    xi, c = Fraction(xi), Fraction(c)
    L = LAM + D
    z = Poly.const(0)
    if xi == 0 and c == 0:
        return [(z, z, z, z), (L, z, L, z), (L, -LAM, z, z)]
    if xi == c:
        return [
            (z, z, z, z),
            (L, z, L + c, Poly.const(c)),
            (L, z, L, z),
            (L + c, z, L + c, z),
            (L, Poly.const(c), L, Poly.const(c)),
            (L + 2 * c, Poly.const(c), L + 2 * c, Poly.const(c)),
            (L + c, Poly.const(c), L, z),
            (L + c, -LAM + c, z, z),
        ]
    if xi == 0:
        return [(z, z, z, z), (L, z, L, z), (L + c, Poly.const(c), L, z)]
    if c == 0:
        return [(z, z, z, z), (L, z, L + xi, Poly.const(xi)), (L, z, L, z)]
    if c == 2 * xi:
        return [
            (z, z, z, z),
            (L, z, L + xi, Poly.const(xi)),
            (L, z, L, z),
            (L + xi, z, L + 2 * xi, Poly.const(xi)),
            (L + 2 * xi, Poly.const(2 * xi), L, z),
        ]
    if xi == 2 * c:
        return [
            (z, z, z, z),
            (L, z, L + 2 * c, Poly.const(2 * c)),
            (L, z, L, z),
            (L + 2 * c, Poly.const(c), L + c, z),
            (L + c, Poly.const(c), L, z),
        ]
    return [(z, z, z, z), (L, z, L + xi, Poly.const(xi)), (L, z, L, z), (L + c, Poly.const(c), L, z)]


BICROSSED_REGIMES = [(0, 0), (1, 1), (0, 1), (1, 0), (1, 2), (2, 1), (3, 1)]


def bicrossed_datums(xi, c) -> List[FlagDatum]:
    R = Rc(c)
    return [bicrossed_flag(R, xi, *t) for t in bicrossed_representatives(xi, c)]


def virasoro_pair(c=1) -> Tuple[FlagDatum, FlagDatum]:
    """(0,0,d+lam+c,-lam+c,0,lam+d+c) and (0,0,0,0,0,lam+d+c) over R_c."""
    R = Rc(c)
    c = Poly.const(Fraction(c))
    fd1 = FlagDatum.build(R, D=[[D + LAM + c]], T=[[c - LAM]], P=LAM + D + c)
    fd2 = FlagDatum.build(R, P=LAM + D + c)
    return fd1, fd2


def crossed_sample() -> FlagDatum:
    return crossed_flag_family(RLW(), LAM, 1, LAM, 2)


def crossed_sample_normal() -> FlagDatum:
    return crossed_flag_family(RLW(), LAM - 2, 1, 0, 0)


def algebras() -> Dict[str, LambdaTable]:
    """Every left-symmetric fixture, with the parametric one at c = 1."""
    return {"R0": R0(), "R1": R1(), "Rc": Rc(1), "RLW": RLW()}

"""Exact linear algebra over the rationals.

Elimination runs on integer rows (each row cleared of denominators and
divided by its content), so intermediate entries stay small; the reduced
echelon form is converted back to Fractions at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .polyring import Monomial, Poly

Vector = List[Fraction]


def _integer_row(row: Sequence) -> List[int]:
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in row]
    return _primitive(ints)


def _primitive(row: List[int]) -> List[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        row = [x // g for x in row]
    return row


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form and pivot columns."""
    work = [_integer_row(r) for r in rows if any(r)]
    pivots: List[int] = []
    top = 0
    for col in range(ncols):
        if top >= len(work):
            break
        pick = None
        for i in range(top, len(work)):
            if work[i][col]:
                if pick is None or abs(work[i][col]) < abs(work[pick][col]):
                    pick = i
        if pick is None:
            continue
        work[top], work[pick] = work[pick], work[top]
        prow = work[top]
        p = prow[col]
        for i in range(len(work)):
            if i == top or not work[i][col]:
                continue
            f = work[i][col]
            g = gcd(p, f)
            a, b = p // g, f // g
            work[i] = _primitive([a * x - b * y for x, y in zip(work[i], prow)])
        pivots.append(col)
        top += 1
    out: List[Vector] = []
    for r, col in zip(work, pivots):
        p = r[col]
        out.append([Fraction(x, p) for x in r])
    return out, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[Tuple[Vector, List[Vector]]]:
    """Solve ``A x = b``; returns (particular solution, nullspace basis) or None.

    The particular solution has every free coordinate set to zero.
    """
    aug = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return x, nullspace(rows, ncols)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


# ---- linear systems from polynomial residuals -------------------------------


def unknown_names(n: int, prefix: str = "__u") -> List[str]:
    return [f"{prefix}{i}" for i in range(n)]


class NonLinear(ValueError):
    pass


def linear_system(residuals: Sequence[Poly], unknowns: Sequence[str]) -> Tuple[List[Vector], Vector]:
    """Coefficient matching: every residual must vanish identically.

    Each residual is affine in ``unknowns``.  Returns ``(A, b)`` with one row
    per monomial in the remaining variables, so that ``A u = b``.
    """
    index = {u: i for i, u in enumerate(unknowns)}
    n = len(unknowns)
    rows: Dict[Tuple[int, Monomial], Vector] = {}
    order: List[Tuple[int, Monomial]] = []
    for ri, res in enumerate(residuals):
        for mono, c in res.items():
            hit = None
            rest = []
            for v, e in mono:
                if v in index:
                    if hit is not None or e != 1:
                        raise NonLinear(f"residual is not linear in the unknowns: {res}")
                    hit = index[v]
                else:
                    rest.append((v, e))
            key = (ri, tuple(rest))
            if key not in rows:
                rows[key] = [Fraction(0)] * (n + 1)
                order.append(key)
            if hit is None:
                rows[key][n] -= c
            else:
                rows[key][hit] += c
    A = [rows[k][:n] for k in order]
    b = [rows[k][n] for k in order]
    return A, b


def assign_unknowns(p: Poly, unknowns: Sequence[str], values: Sequence[Fraction]) -> Poly:
    return p.subs({u: Poly.const(v) for u, v in zip(unknowns, values)})

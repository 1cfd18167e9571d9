"""Free C[d]-modules, elements, lambda-tables and conformal operator tables.

Everything is stored on basis vectors and extended by conformal
sesquilinearity when evaluated.  A spectral argument may be any polynomial
expression, including ones that mention ``d`` (as in ``b_{-lam-d} a``); it
is substituted simultaneously, which is the same as evaluating with a fresh
spectral variable and substituting afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .parsing import format_linear
from .polyring import D, ONE, SPECTRAL, ZERO, Poly, PolyError, poly_assign

Spectral = Union[Poly, str]

CONFORMAL = "conformal"
LEFT_CONFORMAL = "left-conformal"


class ModuleMismatch(ValueError):
    pass


class VariableCollision(ValueError):
    pass


def _spectral(s: Spectral) -> Poly:
    return Poly.var(s) if isinstance(s, str) else Poly.coerce(s)


@dataclass(frozen=True)
class FreeModule:
    """Free module over the polynomial ring in ``d`` with a named basis."""

    basis: Tuple[str, ...]
    params: frozenset = field(default=frozenset(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "params", frozenset(self.params))
        if len(set(self.basis)) != len(self.basis):
            raise ValueError(f"basis names must be distinct: {self.basis}")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def zero(self) -> "Element":
        return Element(self, (ZERO,) * self.rank)

    def gen(self, i: Union[int, str]) -> "Element":
        if isinstance(i, str):
            i = self.index(i)
        return Element(self, tuple(ONE if k == i else ZERO for k in range(self.rank)))

    def gens(self) -> List["Element"]:
        return [self.gen(i) for i in range(self.rank)]

    def element(self, coeffs: Sequence) -> "Element":
        return Element(self, tuple(Poly.coerce(c) for c in coeffs))


@dataclass(frozen=True)
class Element:
    module: FreeModule
    coeffs: Tuple[Poly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.module.rank:
            raise ModuleMismatch(
                f"element has {len(self.coeffs)} coefficients, module rank is {self.module.rank}"
            )

    def _check(self, other: "Element"):
        if not isinstance(other, Element) or other.module != self.module:
            raise ModuleMismatch("elements live in different modules")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.module, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.module, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Element":
        return Element(self.module, tuple(-a for a in self.coeffs))

    def __rmul__(self, scalar) -> "Element":
        s = Poly.coerce(scalar)
        return Element(self.module, tuple(s * a for a in self.coeffs))

    __mul__ = __rmul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def subs(self, mapping: Mapping[str, Poly]) -> "Element":
        return Element(self.module, tuple(c.subs(mapping) for c in self.coeffs))

    def variables(self) -> frozenset:
        out = frozenset()
        for c in self.coeffs:
            out |= c.variables()
        return out

    def __str__(self) -> str:
        return format_linear(self.coeffs, self.module.basis)


def shift_spectral(e, v: str, expr) -> object:
    """Substitute the spectral variable ``v`` by ``expr`` in an Element or Poly."""
    if v not in SPECTRAL:
        raise PolyError(f"{v!r} is not a spectral variable")
    q = Poly.coerce(expr)
    if isinstance(e, Element):
        return e.subs({v: q})
    return Poly.coerce(e).subs({v: q})


Entries = Tuple[Tuple[Tuple[Poly, ...], ...], ...]


class LambdaTable:
    """Structure constants of a conformal bilinear map ``left x right -> target``.

    ``entries[i][j]`` is the target coefficient vector of ``(e_i)_lam (f_j)``,
    polynomial in ``d``, ``lam`` and parameters.
    """

    def __init__(self, left: FreeModule, right: FreeModule, target: FreeModule, entries=None):
        self.left = left
        self.right = right
        self.target = target
        if entries is None:
            entries = {}
        if isinstance(entries, Mapping):
            grid = [[[ZERO] * target.rank for _ in range(right.rank)] for _ in range(left.rank)]
            for (i, j), vec in entries.items():
                if isinstance(vec, Element):
                    vec = vec.coeffs
                if len(vec) != target.rank:
                    raise ModuleMismatch(f"entry ({i},{j}) has wrong length")
                grid[i][j] = [Poly.coerce(c) for c in vec]
            entries = grid
        rows = tuple(tuple(tuple(Poly.coerce(c) for c in vec) for vec in row) for row in entries)
        if len(rows) != left.rank or any(len(r) != right.rank for r in rows):
            raise ModuleMismatch("table dimensions do not match modules")
        for row in rows:
            for vec in row:
                if len(vec) != target.rank:
                    raise ModuleMismatch("table entry length does not match target rank")
                for c in vec:
                    if c.variables() & {"mu", "nu"}:
                        raise ValueError("table entries may only use d, lam and parameters")
        self.entries: Entries = rows
        self._lam_cache: Dict[Tuple[int, int, Poly], Tuple[Poly, ...]] = {}

    @classmethod
    def zero(cls, left, right, target) -> "LambdaTable":
        return cls(left, right, target)

    @property
    def square(self) -> bool:
        return self.left == self.right == self.target

    def entry(self, i: int, j: int) -> Element:
        return Element(self.target, self.entries[i][j])

    def is_zero(self) -> bool:
        return all(c.is_zero() for row in self.entries for vec in row for c in vec)

    def params(self) -> frozenset:
        out = frozenset()
        for row in self.entries:
            for vec in row:
                for c in vec:
                    out |= c.variables()
        return out - {"d", "lam", "mu", "nu"}

    def map_entries(self, fn) -> "LambdaTable":
        return LambdaTable(
            self.left,
            self.right,
            self.target,
            [[[fn(c) for c in vec] for vec in row] for row in self.entries],
        )

    def assign(self, bindings: Mapping[str, Fraction]) -> "LambdaTable":
        return self.map_entries(lambda c: poly_assign(c, bindings))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaTable):
            return NotImplemented
        return (
            self.left == other.left
            and self.right == other.right
            and self.target == other.target
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def _at(self, i: int, j: int, s: Poly) -> Tuple[Poly, ...]:
        key = (i, j, s)
        got = self._lam_cache.get(key)
        if got is None:
            got = tuple(c.subs({"lam": s}) for c in self.entries[i][j])
            if len(self._lam_cache) > 4096:
                self._lam_cache.clear()
            self._lam_cache[key] = got
        return got

    def product(self, a: Element, b: Element, s: Spectral) -> Element:
        """``a_s b`` by sesquilinearity: sum of f_i(-s) g_j(d+s) P_ij(d, s)."""
        if a.module != self.left or b.module != self.right:
            raise ModuleMismatch("arguments do not belong to the table's source modules")
        s = _spectral(s)
        out = [ZERO] * self.target.rank
        shift_a = {"d": -s}
        shift_b = {"d": D + s}
        b_shifted = [None] * len(b.coeffs)
        for i, ai in enumerate(a.coeffs):
            if ai.is_zero():
                continue
            ai_s = ai.subs(shift_a)
            for j, bj in enumerate(b.coeffs):
                if bj.is_zero():
                    continue
                if b_shifted[j] is None:
                    b_shifted[j] = bj.subs(shift_b)
                vec = self.entries[i][j]
                if all(c.is_zero() for c in vec):
                    continue
                f = ai_s * b_shifted[j]
                for k, c in enumerate(self._at(i, j, s)):
                    if not c.is_zero():
                        out[k] = out[k] + f * c
        return Element(self.target, tuple(out))


def eval_lambda(table: LambdaTable, a: Element, b: Element, out_var: str) -> Element:
    """Evaluate ``a_{out_var} b`` on general elements."""
    if out_var not in SPECTRAL:
        raise PolyError(f"{out_var!r} is not a spectral variable")
    if out_var in a.variables() or out_var in b.variables():
        raise VariableCollision(f"{out_var!r} already occurs in the arguments")
    return table.product(a, b, Poly.var(out_var))


class OperatorTable:
    """A conformal or left-conformal linear map stored on basis vectors.

    ``target`` is a module for vector-valued maps and ``None`` for
    polynomial-valued functionals such as ``h_lam(., d)``.
    Conformal: ``T_s(f(d) v) = f(d+s) T_s(v)``.
    Left-conformal: ``h_s(f(d) v) = f(-s) h_s(v)``.
    """

    def __init__(self, on: FreeModule, target: FreeModule | None, entries, variance: str = CONFORMAL):
        if variance not in (CONFORMAL, LEFT_CONFORMAL):
            raise ValueError(f"unknown variance {variance!r}")
        self.on = on
        self.target = target
        self.variance = variance
        if isinstance(entries, Mapping):
            entries = [entries.get(i, None) for i in range(on.rank)]
        if len(entries) != on.rank:
            raise ModuleMismatch("operator must have one value per basis vector")
        rows = []
        for val in entries:
            if target is None:
                p = ZERO if val is None else Poly.coerce(val)
                if p.variables() & {"mu", "nu"}:
                    raise ValueError("operator entries may only use d, lam and parameters")
                rows.append(p)
            else:
                if val is None:
                    val = (ZERO,) * target.rank
                if isinstance(val, Element):
                    val = val.coeffs
                vec = tuple(Poly.coerce(c) for c in val)
                if len(vec) != target.rank:
                    raise ModuleMismatch("operator value has wrong length")
                if any(c.variables() & {"mu", "nu"} for c in vec):
                    raise ValueError("operator entries may only use d, lam and parameters")
                rows.append(vec)
        self.entries = tuple(rows)

    @classmethod
    def zero(cls, on: FreeModule, target: FreeModule | None, variance: str = CONFORMAL):
        return cls(on, target, [None] * on.rank, variance)

    @property
    def functional(self) -> bool:
        return self.target is None

    def is_zero(self) -> bool:
        if self.functional:
            return all(p.is_zero() for p in self.entries)
        return all(c.is_zero() for vec in self.entries for c in vec)

    def value(self, i: int):
        return self.entries[i] if self.functional else Element(self.target, self.entries[i])

    def params(self) -> frozenset:
        out = frozenset()
        for val in self.entries:
            for c in ((val,) if self.functional else val):
                out |= c.variables()
        return out - {"d", "lam", "mu", "nu"}

    def map_entries(self, fn) -> "OperatorTable":
        if self.functional:
            rows = [fn(p) for p in self.entries]
        else:
            rows = [[fn(c) for c in vec] for vec in self.entries]
        return OperatorTable(self.on, self.target, rows, self.variance)

    def assign(self, bindings) -> "OperatorTable":
        return self.map_entries(lambda c: poly_assign(c, bindings))

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorTable):
            return NotImplemented
        return (
            self.on == other.on
            and self.target == other.target
            and self.variance == other.variance
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def apply(self, v: Element, s: Spectral, second=None):
        """Evaluate at spectral argument ``s``.

        ``second`` replaces the ``d`` slot of a functional's table value,
        i.e. ``h_s(v, second)``; it defaults to ``d``.
        """
        if v.module != self.on:
            raise ModuleMismatch("operator applied to an element of another module")
        s = _spectral(s)
        if self.variance == CONFORMAL:
            shift = {"d": D + s}
        else:
            shift = {"d": -s}
        if self.functional:
            slot = {"lam": s}
            if second is not None:
                slot["d"] = Poly.coerce(second)
            total = ZERO
            for vi, hi in zip(v.coeffs, self.entries):
                if vi.is_zero() or hi.is_zero():
                    continue
                total = total + vi.subs(shift) * hi.subs(slot)
            return total
        if second is not None:
            raise ValueError("only functionals take a second argument")
        out = [ZERO] * self.target.rank
        for vi, vec in zip(v.coeffs, self.entries):
            if vi.is_zero():
                continue
            f = vi.subs(shift)
            for k, c in enumerate(vec):
                if not c.is_zero():
                    out[k] = out[k] + f * c.subs({"lam": s})
        return Element(self.target, tuple(out))


def apply_operator(op: OperatorTable, v: Element, out_var: str):
    """Apply ``op`` at a fresh spectral variable ``out_var``."""
    if out_var not in SPECTRAL:
        raise PolyError(f"{out_var!r} is not a spectral variable")
    if out_var in v.variables():
        raise VariableCollision(f"{out_var!r} already occurs in the argument")
    return op.apply(v, Poly.var(out_var))


def build_current(mult_table: Sequence[Sequence[Sequence]], basis: Sequence[str] | None = None) -> LambdaTable:
    """Current algebra over an algebra given by ``e_i o e_j = sum_k c[i][j][k] e_k``."""
    n = len(mult_table)
    if basis is None:
        basis = [f"e{i + 1}" for i in range(n)]
    if len(basis) != n:
        raise ModuleMismatch("basis length does not match the multiplication table")
    for row in mult_table:
        if len(row) != n or any(len(vec) != n for vec in row):
            raise ModuleMismatch("multiplication table must be n x n x n")
    m = FreeModule(tuple(basis), name="Cur")
    entries = {
        (i, j): [Poly.const(Fraction(c)) for c in mult_table[i][j]]
        for i in range(n)
        for j in range(n)
    }
    return LambdaTable(m, m, m, entries)


def as_poly_vector(e: Element) -> Tuple[Poly, ...]:
    return e.coeffs


def element_from(module: FreeModule, values: Iterable) -> Element:
    return module.element(list(values))

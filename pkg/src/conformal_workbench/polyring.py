"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` is an immutable map from monomials to nonzero
:class:`fractions.Fraction` coefficients.  A monomial is a tuple of
``(variable, exponent)`` pairs sorted by variable order.  Four names are
reserved: ``d`` (the derivation of the module), and the spectral variables
``lam``, ``mu``, ``nu``.  Every other identifier is a parameter, an ordinary
commuting indeterminate.

Variable order is ``d < lam < mu < nu < parameters`` (parameters
alphabetically).  Printing lists monomials by descending total degree, ties
broken lexicographically in that variable order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

RESERVED = ("d", "lam", "mu", "nu")
SPECTRAL = ("lam", "mu", "nu")

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]


class PolyError(ValueError):
    pass


def var_key(name: str) -> tuple:
    # d, lam, mu, nu already sort alphabetically among themselves
    return (name not in RESERVED, name)


def is_reserved(name: str) -> bool:
    return name in RESERVED


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif var_key(v1) < var_key(v2):
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial) -> tuple:
    return (-_mono_degree(m), tuple((var_key(v), -e) for v, e in m))


class Poly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = clean.get(m, Fraction(0)) + c
                    if not clean[m]:
                        del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((name, 1),): Fraction(1)})

    @staticmethod
    def coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        if isinstance(x, str):
            return Poly.var(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    # ---- inspection ----------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not a constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self, variables: Iterable[str] | None = None) -> int:
        """Total degree, optionally counting only ``variables``; -1 for zero."""
        if not self._terms:
            return -1
        if variables is None:
            return max(_mono_degree(m) for m in self._terms)
        vs = set(variables)
        return max(sum(e for v, e in m if v in vs) for m in self._terms)

    def canonical(self) -> tuple:
        return tuple(sorted(self._terms.items(), key=lambda t: _mono_sort_key(t[0])))

    # ---- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return ZERO
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ---- substitution and evaluation ------------------------------------

    def subs(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous substitution of variables by polynomials."""
        if not mapping or not self._terms:
            return self
        mapping = {v: Poly.coerce(q) for v, q in mapping.items()}
        present = self.variables()
        if not any(v in present for v in mapping):
            return self
        powers: Dict[Tuple[str, int], Poly] = {}

        def power(v: str, e: int) -> Poly:
            key = (v, e)
            if key not in powers:
                powers[key] = mapping[v] ** e
            return powers[key]

        acc: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            kept = tuple((v, e) for v, e in m if v not in mapping)
            factor = Poly._raw({kept: c})
            for v, e in m:
                if v in mapping:
                    factor = factor * power(v, e)
            for mm, cc in factor._terms.items():
                s = acc.get(mm, 0) + cc
                if s:
                    acc[mm] = s
                else:
                    acc.pop(mm, None)
        return Poly._raw(acc)

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                if v not in values:
                    raise PolyError(f"no value for variable {v!r}")
                t *= Fraction(values[v]) ** e
            total += t
        return total

    def coefficients(self, variables: Iterable[str]) -> Dict[Monomial, "Poly"]:
        """Split into ``{monomial in variables: coefficient Poly in the rest}``."""
        vs = set(variables)
        out: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            inside = tuple((v, e) for v, e in m if v in vs)
            rest = tuple((v, e) for v, e in m if v not in vs)
            out.setdefault(inside, {})[rest] = c
        return {k: Poly._raw(v) for k, v in out.items()}

    # ---- printing --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.canonical()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                body = _fmt_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_rational(a)}*{mono}"
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


ZERO = Poly._raw({})
ONE = Poly._raw({(): Fraction(1)})
D = Poly.var("d")
LAM = Poly.var("lam")
MU = Poly.var("mu")
NU = Poly.var("nu")


def poly_subst(p: Poly, v: str, q) -> Poly:
    """Substitute the reserved variable ``v`` by ``q``; parameters are refused."""
    if v not in RESERVED:
        raise PolyError(f"cannot substitute parameter {v!r}; bind it with poly_assign")
    return p.subs({v: Poly.coerce(q)})


def poly_assign(p: Poly, bindings: Mapping[str, Scalar]) -> Poly:
    """Replace parameters by rationals; unbound parameters stay symbolic."""
    for name in bindings:
        if name in RESERVED:
            raise PolyError(f"cannot bind reserved variable {name!r}")
    return p.subs({k: Poly.const(Fraction(v)) for k, v in bindings.items()})


def parameters_of(p: Poly) -> frozenset:
    return frozenset(v for v in p.variables() if v not in RESERVED)

"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace insignificant)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' int)?
    base     := rational | ident | '(' expr ')'
    rational := int ('/' posint)?
    ident    := [A-Za-z_][A-Za-z0-9_]*

``d`` is the module derivation, ``lam``/``mu``/``nu`` are spectral
variables; any other identifier must be a declared parameter (or, for
element strings, a basis name).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .polyring import ONE, RESERVED, ZERO, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, src: str = "", pos: int | None = None):
        self.src = src
        self.pos = pos
        self.bare = message
        if pos is not None:
            message = f"{message} at column {pos + 1}"
        super().__init__(message)


class UndeclaredIdentifier(ParseError):
    pass


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while src[pos:].strip():
        m = _TOKEN.match(src, pos)
        if m is None:  # pragma: no cover - the regex always matches
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", src, m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, allowed: frozenset):
        self.src = src
        self.allowed = allowed
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch: str):
        kind, val, pos = self.take()
        if kind != "op" or val != ch:
            raise ParseError(f"expected {ch!r}", self.src, pos)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.src, 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", self.src, pos)
        return p

    def expr(self) -> Poly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Poly:
        base = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind == "op" and val == "-":
                raise ParseError("negative exponent", self.src, pos)
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", self.src, pos)
            return base ** int(val)
        return base

    def base(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "int" or int(v3) == 0:
                    raise ParseError("denominator must be a positive integer", self.src, p3)
                return Poly.const(Fraction(num, int(v3)))
            return Poly.const(num)
        if kind == "ident":
            if val not in self.allowed:
                raise UndeclaredIdentifier(f"undeclared identifier {val!r}", self.src, pos)
            return Poly.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of expression", self.src, pos)
        raise ParseError(f"unexpected {val!r}", self.src, pos)


def poly_parse(src: str, declared_params: Iterable[str] = ()) -> Poly:
    """Parse ``src`` into a canonical :class:`Poly`."""
    params = frozenset(declared_params)
    clash = params & set(RESERVED)
    if clash:
        raise ParseError(f"parameter names collide with reserved names: {sorted(clash)}")
    return _Parser(src, frozenset(RESERVED) | params).parse()


def parse_linear(src: str, basis: Sequence[str], declared_params: Iterable[str] = ()) -> List[Poly]:
    """Parse a combination like ``"(d+lam)*x + 2*y"`` into coefficient Polys.

    The expression must be linear in the basis names.
    """
    params = frozenset(declared_params)
    names = frozenset(basis)
    overlap = names & (params | set(RESERVED))
    if overlap:
        raise ParseError(f"basis names collide with variables: {sorted(overlap)}")
    p = _Parser(src, frozenset(RESERVED) | params | names).parse()
    coeffs = [ZERO] * len(basis)
    index = {b: i for i, b in enumerate(basis)}
    for mono, coeff in p.coefficients(names).items():
        if len(mono) != 1 or mono[0][1] != 1:
            raise ParseError(f"expression {src!r} is not linear in the basis {list(basis)}")
        coeffs[index[mono[0][0]]] = coeff
    return coeffs


def format_linear(coeffs: Sequence[Poly], basis: Sequence[str]) -> str:
    """Inverse of :func:`parse_linear`; ``"0"`` for the zero vector."""
    parts = []
    for c, name in zip(coeffs, basis):
        if c.is_zero():
            continue
        if c == ONE:
            parts.append(name)
        elif c.is_constant() and c.constant_value() > 0:
            parts.append(f"{c}*{name}")
        else:
            parts.append(f"({c})*{name}")
    return " + ".join(parts) if parts else "0"

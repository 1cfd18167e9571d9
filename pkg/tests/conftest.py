import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from conformal_workbench.core import FreeModule, LambdaTable
from conformal_workbench.polyring import ZERO, Poly

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")

SYMS = {name: sympy.Symbol(name) for name in ("d", "lam", "mu", "nu", "c", "xi")}


def to_sympy(p: Poly):
    """Independent view of a Poly as a sympy expression."""
    expr = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in mono:
            term *= SYMS.setdefault(v, sympy.Symbol(v)) ** e
        expr += term
    return expr


def monomial_terms(variables, max_deg):
    out = []
    for v in variables:
        for e in range(1, max_deg + 1):
            out.append((v, e))
    return out


@st.composite
def polys(draw, variables=("d", "lam", "mu", "c"), max_terms=4, max_deg=2):
    p = ZERO
    for _ in range(draw(st.integers(0, max_terms))):
        coeff = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        term = Poly.const(coeff)
        for v in variables:
            term = term * Poly.var(v) ** draw(st.integers(0, max_deg))
        p = p + term
    return p


def random_poly(rng: random.Random, variables=("lam", "d"), deg=2, density=0.4, lo=-2, hi=2) -> Poly:
    p = ZERO
    for i in range(deg + 1):
        for j in range(deg + 1 - i):
            if rng.random() < density:
                mono = Poly.var(variables[0]) ** i * Poly.var(variables[1]) ** j
                p = p + Poly.const(rng.randint(lo, hi)) * mono
    return p


def random_table(rng, A: FreeModule, B: FreeModule, C: FreeModule, **kw) -> LambdaTable:
    return LambdaTable(A, B, C, {
        (i, j): [random_poly(rng, **kw) for _ in range(C.rank)] for i in range(A.rank) for j in range(B.rank)
    })


@pytest.fixture
def rng():
    return random.Random(20240607)

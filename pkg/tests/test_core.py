import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conformal_workbench.axioms import check_lsca
from conformal_workbench.core import (
    CONFORMAL,
    LEFT_CONFORMAL,
    FreeModule,
    LambdaTable,
    ModuleMismatch,
    OperatorTable,
    VariableCollision,
    apply_operator,
    build_current,
    eval_lambda,
    shift_spectral,
)
from conformal_workbench.fixtures import R0, RLW, X, Bad1, Rc
from conformal_workbench.polyring import D, LAM, MU, Poly

from conftest import polys


def test_eval_sesquilinear_rc():
    R = Rc()
    x = R.left.gen(0)
    got = eval_lambda(R, x, D * x, "lam")
    c = Poly.var("c")
    assert got.coeffs == ((D + LAM) * (D + LAM + c),)


def test_eval_r0_and_bad1():
    x = X.gen(0)
    assert eval_lambda(R0(), (D**2 + 1) * x, (LAM * D) * x, "mu").is_zero()
    assert eval_lambda(Bad1(), x, x, "lam").coeffs == (LAM,)


def test_eval_rejects_captured_variable():
    x = X.gen(0)
    with pytest.raises(VariableCollision):
        eval_lambda(R0(), LAM * x, x, "lam")


def test_eval_rejects_wrong_module():
    other = FreeModule(("y",))
    with pytest.raises(ModuleMismatch):
        eval_lambda(R0(), other.gen(0), X.gen(0), "lam")


@given(polys(variables=("d",)), polys(variables=("d",)))
def test_sesquilinearity_property(f, g):
    # (f(d) a)_lam (g(d) b) = f(-lam) g(d+lam) a_lam b
    R = Rc(1)
    x = R.left.gen(0)
    got = eval_lambda(R, f * x, g * x, "lam")
    want = f.subs({"d": -LAM}) * g.subs({"d": D + LAM}) * (D + LAM + 1)
    assert got.coeffs == (want,)


def test_operator_variance():
    c = Poly.var("c")
    m = FreeModule(("x",), frozenset({"c"}))
    x = m.gen(0)
    Dop = OperatorTable(m, m, [[D + LAM + c]], CONFORMAL)
    assert apply_operator(Dop, D * x, "lam").coeffs == ((D + LAM) * (D + LAM + c),)
    h = OperatorTable(m, None, [D + LAM], LEFT_CONFORMAL)
    assert apply_operator(h, D * x, "lam") == -LAM * (D + LAM)
    assert apply_operator(OperatorTable.zero(m, m), (D**3) * x, "lam").is_zero()


def test_operator_entries_restricted():
    with pytest.raises(ValueError):
        OperatorTable(X, X, [[MU]])


def test_shift_spectral():
    c = Poly.var("c")
    e = (D + MU + c) * X.gen(0)
    got = shift_spectral(e, "mu", -LAM - D)
    assert got.coeffs == (c - LAM,)
    # spot check at lam = 0, c = 1
    assert got.coeffs[0].evaluate({"lam": 0, "c": 1}) == 1
    assert shift_spectral(e, "mu", MU) == e


def test_current_of_one_dim_idempotent_is_r1():
    t = build_current([[[1]]], ["x"])
    assert t.entries[0][0] == (Poly.const(1),)
    assert build_current([[[0]]]).is_zero()


def _left_symmetric(mult):
    n = len(mult)

    def prod(u, v):
        return [sum(u[i] * v[j] * mult[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]

    basis = [[1 if i == k else 0 for i in range(n)] for k in range(n)]
    for a, b, c in itertools.product(basis, repeat=3):
        assoc_abc = [p - q for p, q in zip(prod(prod(a, b), c), prod(a, prod(b, c)))]
        assoc_bac = [p - q for p, q in zip(prod(prod(b, a), c), prod(b, prod(a, c)))]
        if assoc_abc != assoc_bac:
            return False
    return True


def test_current_checker_agrees_with_associator_bruteforce():
    # every 2-dim algebra with structure constants in {0, 1} and few nonzeros
    slots = list(itertools.product(range(2), repeat=3))
    agree = 0
    for chosen in itertools.combinations(slots, 2):
        mult = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
        for i, j, k in chosen:
            mult[i][j][k] = 1
        assert check_lsca(build_current(mult)).passed == _left_symmetric(mult)
        agree += 1
    assert agree == 28
    single = [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]
    assert check_lsca(build_current(single)).passed


def test_table_equality_and_assign():
    assert Rc(1) == Rc("c").assign({"c": 1})
    assert RLW() != Rc(1)
    assert Rc().params() == frozenset({"c"})


def test_table_shape_errors():
    with pytest.raises((ModuleMismatch, ValueError)):
        LambdaTable(X, X, X, {(0, 0): [1, 2]})

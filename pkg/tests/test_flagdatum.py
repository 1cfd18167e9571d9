import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conformal_workbench.axioms import check_lsca, residual
from conformal_workbench.core import ModuleMismatch
from conformal_workbench.fixtures import (
    RLW,
    Rc,
    bicrossed_datums,
    bicrossed_representatives,
    crossed_sample,
    crossed_sample_normal,
    virasoro_pair,
)
from conformal_workbench.flagdatum import (
    EquivWitness,
    FlagDatum,
    build_flag_extension,
    build_flag_extension_unchecked,
    check_dflc_membership,
    check_equiv,
    check_equiv_dflc,
    check_flag,
    crossed_flag_family,
    datum_to_flag,
    flag_to_datum,
    search_equiv,
    transport_flag,
)
from conformal_workbench.operators import SymbolicParameters
from conformal_workbench.polyring import D, LAM, Poly
from conformal_workbench.products import DatumError, build_unified_unchecked, check_crossed, check_extending_structure

from corpus import algebra_bases, invalid_flags, random_flag, sparse_flag, valid_flags
from conftest import random_poly

# flag condition -> (general condition, argument pattern) for a rank-one Q spanned by x
PAIRING = {
    "lfd1": ("LC1", "xab"), "lfd2": ("LC2", "xab"),
    "lfd3": ("LC3", "abx"), "lfd4": ("LC4", "abx"),
    "lfd5": ("LC5", "axx"), "lfd6": ("LC6", "axx"),
    "lfd7": ("LC7", "xxa"), "lfd8": ("LC8", "xxa"),
    "lfd9": ("LC9", "xxx"), "lfd10": ("LC10", "xxx"),
}


def _general_indices(pattern, idx):
    it = iter(idx)
    return tuple(0 if ch == "x" else next(it) for ch in pattern)


def test_each_condition_matches_its_general_form(rng):
    for R in algebra_bases():
        for _ in range(3):
            fd = random_flag(rng, R)
            d = flag_to_datum(fd)
            n = R.left.rank
            for lfd, (lc, pattern) in PAIRING.items():
                arity = sum(ch != "x" for ch in pattern)
                for idx in itertools.product(range(n), repeat=arity):
                    assert residual(lfd, fd, idx) == residual(lc, d, _general_indices(pattern, idx))


def test_checkers_agree_on_corpus_and_random(rng):
    flags = valid_flags() + invalid_flags()
    flags += [sparse_flag(rng, R) for R in algebra_bases() for _ in range(8)]
    flags += [random_flag(rng, R) for R in algebra_bases() for _ in range(3)]
    outcomes = set()
    for fd in flags:
        ok = check_flag(fd).passed
        assert ok == check_extending_structure(flag_to_datum(fd)).passed
        outcomes.add(ok)
    assert outcomes == {True, False}


def test_examples_pass():
    fd1, fd2 = virasoro_pair(1)
    assert check_flag(fd1).passed and check_flag(fd2).passed
    assert check_flag(FlagDatum.build(Rc())).passed
    c = Poly.var("c")
    assert check_flag(FlagDatum.build(Rc(), P=LAM + D + c)).passed
    # h = lam + d, D = lam + d + 1, T = 1, P = lam + d + 1 over R_1
    fd = FlagDatum.build(Rc(1), h=[LAM + D], D=[[LAM + D + 1]], T=[[1]], P=LAM + D + 1)
    assert check_flag(fd).passed


def test_build_and_translation():
    fd = FlagDatum.build(Rc(), P=LAM + D + Poly.var("c"))
    P = build_flag_extension(fd)
    assert check_lsca(P.table).passed
    d = flag_to_datum(fd)
    assert d.circ.entries[0][0] == (LAM + D + Poly.var("c"),)
    assert all(d.tables()[k].is_zero() for k in ("phi", "psi", "l", "r", "g"))
    zero = build_flag_extension(FlagDatum.build(Rc(1)))
    assert zero.table.entries[1][1] == (Poly.const(0), Poly.const(0))


def test_two_builders_agree(rng):
    for R in algebra_bases():
        fd = random_flag(rng, R)
        assert build_flag_extension_unchecked(fd).table == build_unified_unchecked(flag_to_datum(fd)).table
        assert datum_to_flag(flag_to_datum(fd)) == fd


def test_build_refuses_bad():
    with pytest.raises(DatumError):
        build_flag_extension(crossed_sample())


def test_generator_name_avoids_r():
    fd = FlagDatum.build(RLW())
    assert fd.x not in RLW().left.basis


# ---- equivalence -----------------------------------------------------------------------


def test_virasoro_witness():
    fd1, fd2 = virasoro_pair(1)
    x = fd1.Rm.gen(0)
    assert check_equiv(fd1, fd2, EquivWitness(x, 1)).passed
    rep = check_equiv(fd1, fd2, EquivWitness(fd1.Rm.zero(), 1))
    assert rep.lines()[0] == "(d + lam + 1)*x at (x), law=equiv-D"


def test_reflexive_on_corpus():
    for fd in valid_flags()[:10]:
        assert check_equiv(fd, fd, EquivWitness(fd.Rm.zero(), 1)).passed


def test_hk_mismatch_short_circuits():
    a, b = bicrossed_datums(1, 1)[0:2]
    rep = check_equiv(a, b, EquivWitness(a.Rm.zero(), 1))
    assert not rep.passed
    assert rep.notes == ["witness equations not checked: h or k differ"]


def test_witness_validation():
    with pytest.raises(ValueError):
        EquivWitness(Rc(1).left.gen(0), 0)
    with pytest.raises(ValueError):
        EquivWitness(LAM * Rc(1).left.gen(0), 1)
    with pytest.raises(ModuleMismatch):
        check_equiv(FlagDatum.build(Rc(1)), FlagDatum.build(RLW()), EquivWitness(Rc(1).left.zero()))


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.sampled_from([1, -1, 2, Fraction(1, 2)]))
def test_transport_preserves_validity_and_is_witnessed(seed, beta):
    rng = random.Random(seed)
    flags = valid_flags()
    fd2 = flags[rng.randrange(len(flags))]
    m = fd2.Rm
    omega = m.element([random_poly(rng, ("d", "d"), deg=1) for _ in range(m.rank)])
    fd1 = transport_flag(fd2, omega, beta)
    assert check_equiv(fd1, fd2, EquivWitness(omega, beta)).passed
    assert check_flag(fd1).passed


def _dflc_pairs(rng):
    R = Rc(1)
    m = R.left
    for _ in range(6):
        P = random_poly(rng, density=0.5)
        fd1 = FlagDatum.build(R, D=[[random_poly(rng)]], M=[random_poly(rng)], P=P)
        fd2 = FlagDatum.build(R, D=[[random_poly(rng)]], M=[random_poly(rng)], P=P)
        yield "DFLC1", fd1, fd2
        k = [random_poly(rng, density=0.5) + 1]
        yield "DFLC2", FlagDatum.build(R, k=k, D=[[random_poly(rng)]]), FlagDatum.build(R, k=k, D=[[random_poly(rng)]])


def test_reduced_witness_equations_agree(rng):
    m = Rc(1).left
    for kind, fd1, fd2 in _dflc_pairs(rng):
        for omega in (m.zero(), m.gen(0), (D + 1) * m.gen(0)):
            for beta in (1, 2):
                w = EquivWitness(omega, beta)
                assert check_equiv_dflc(fd1, fd2, w, kind).passed == check_equiv(fd1, fd2, w).passed
    with pytest.raises(ValueError):
        check_equiv_dflc(fd1, fd2, EquivWitness(m.zero()), "DFLC3")


def test_reduced_equations_on_transported_pair():
    fd2 = FlagDatum.build(Rc(0), P=LAM + D)
    omega = Rc(0).left.zero()
    fd1 = transport_flag(fd2, omega, 2)
    assert check_equiv_dflc(fd1, fd2, EquivWitness(omega, 2), "DFLC1").passed


# ---- search -------------------------------------------------------------------------------


def test_search_finds_virasoro_witness():
    fd1, fd2 = virasoro_pair(1)
    res = search_equiv(fd1, fd2, 0, [1])
    assert res.status == "found"
    assert res.witness.omega == fd1.Rm.gen(0) and res.witness.beta == 1


def test_search_self():
    for fd in valid_flags()[:6]:
        res = search_equiv(fd, fd, 1)
        assert res.found
        assert res.witness.beta == 1 and res.witness.omega.is_zero()


def test_search_recovers_transported(rng):
    flags = valid_flags()
    for _ in range(6):
        fd2 = flags[rng.randrange(len(flags))]
        m = fd2.Rm
        omega = m.element([random_poly(rng, ("d", "d"), deg=1) for _ in range(m.rank)])
        beta = rng.choice([1, -1, 2])
        fd1 = transport_flag(fd2, omega, beta)
        res = search_equiv(fd1, fd2, 2)
        assert res.found
        assert check_equiv(fd1, fd2, res.witness).passed


def test_search_distinct_representatives():
    reps = bicrossed_datums(1, 1)
    res = search_equiv(reps[2], reps[3], 3)
    assert res.status == "none-within-bound"
    res = search_equiv(reps[0], reps[1], 3)
    assert res.status == "none-within-bound"
    assert res.notes == ["h or k differ, so no witness exists at any bound"]


def test_search_argument_checks():
    fd = FlagDatum.build(Rc(1))
    with pytest.raises(ValueError):
        search_equiv(fd, fd, 1, [])
    with pytest.raises(ValueError):
        search_equiv(fd, fd, 1, [0])
    with pytest.raises(SymbolicParameters):
        search_equiv(FlagDatum.build(Rc()), FlagDatum.build(Rc()), 1)


# ---- special families ----------------------------------------------------------------------


def test_membership_tags():
    R = Rc(1)
    assert check_dflc_membership(FlagDatum.build(R, D=[[0]], P=LAM + D)).tag == "DFLC1"
    res = check_dflc_membership(FlagDatum.build(R, k=[1], D=[[0]]))
    assert res.tag == "DFLC2" and res.report.passed
    assert check_dflc_membership(FlagDatum.build(R, h=[LAM])).tag == "neither"
    assert not check_dflc_membership(FlagDatum.build(R, D=[[1]], P=LAM + D)).report.passed


# ---- the crossed family over the (L, W) algebra ---------------------------------------------


def _sym(p):
    lam = sympy.Symbol("lam")
    return sympy.sympify(str(Poly.coerce(p)).replace("^", "**"), locals={"lam": lam})


@pytest.mark.parametrize("k0, p1, p0, h", [
    (LAM, 1, LAM, 2), (LAM - 2, 1, 0, 0), (LAM, 1, 0, 0),
    (3, 1, LAM, 2), (1, 1, 0, 0), (LAM, 0, LAM, 2), (LAM - 2, 0, 0, 0),
    (LAM + 2, LAM, 1, 2), (2, LAM, 0, 0), (0, LAM, LAM, 0),
])
def test_crossed_family_validity_criterion(k0, p1, p0, h):
    # derived by matching the d-coefficient of the lfd7 relation on W:
    # the family is valid exactly when p1(mu)(k0(lam) - h) = p1(lam)(k0(mu) - h)
    lam, mu = sympy.symbols("lam mu")
    K, P1 = _sym(k0), _sym(p1)
    predicted = sympy.expand(P1.subs(lam, mu) * (K - h) - P1 * (K.subs(lam, mu) - h)) == 0
    fd = crossed_flag_family(RLW(), k0, p1, p0, h)
    assert check_flag(fd).passed == predicted
    assert check_crossed(flag_to_datum(fd)).passed == predicted


def test_crossed_sample_residual():
    rep = check_flag(crossed_sample())
    assert rep.lines()[0] == "(-d*lam + d*mu - lam^2 + mu^2)*L at (W), law=lfd7"
    assert check_flag(crossed_sample_normal()).lines() == [
        "(-d*lam + d*mu - lam^2 + mu^2)*L at (W), law=lfd7"
    ]


def test_crossed_sample_normal_form_witness():
    res = search_equiv(crossed_sample(), crossed_sample_normal(), 3, [1])
    m = RLW().left
    assert res.found
    assert res.witness.omega == (-D) * m.gen(0) + 2 * m.gen(1)


def test_crossed_family_shape():
    fd = crossed_flag_family(RLW(), LAM, 0, LAM, 2)
    assert str(fd.M) == "(-d*lam - lam^2 + 2*lam)*L + 4*W"
    assert fd.h.is_zero() and fd.k.is_zero() and fd.P.is_zero()
    with pytest.raises(ModuleMismatch):
        crossed_flag_family(Rc(1), LAM, 1, 0, 0)


def test_bicrossed_lists_pass():
    for xi, c in ((0, 0), (1, 1), (3, 1)):
        assert len(bicrossed_representatives(xi, c)) == {(0, 0): 3, (1, 1): 8, (3, 1): 4}[(xi, c)]
        for fd in bicrossed_datums(xi, c):
            assert check_flag(fd).passed

"""Release gate: one test per acceptance criterion, each printing a PASS/FAIL line."""

import itertools
import random
import time

import pytest

from conformal_workbench.axioms import check_lie, check_lsca, residual, subadjacent
from conformal_workbench.fixtures import (
    BICROSSED_REGIMES,
    R0,
    R1,
    RLW,
    Bad1,
    BadD,
    Rc,
    bicrossed_datums,
    crossed_sample,
    crossed_sample_normal,
    virasoro_pair,
)
from conformal_workbench.flagdatum import (
    DEFAULT_BETAS,
    EquivWitness,
    check_equiv,
    check_flag,
    flag_to_datum,
    search_equiv,
)
from conformal_workbench.operators import (
    check_semiquasicentroid,
    inner_operator,
    solve_derivations,
    solve_inner_witness,
)
from conformal_workbench.polyring import D, LAM, MU
from conformal_workbench.products import (
    build_unified,
    build_unified_unchecked,
    check_crossed,
    check_extending_structure,
    extract_datum,
    induced_lie_datum,
    lie_unified_table,
)

from conftest import random_poly
from corpus import algebra_bases, invalid_flags, random_flag, sparse_flag, valid_datums, valid_flags


@pytest.fixture
def gate(capsys):
    """Record named checks and print one verdict line for the criterion."""

    class Gate:
        def __init__(self):
            self.failed = []
            self.start = time.perf_counter()

        def expect(self, ok, what):
            if not ok:
                self.failed.append(what)

        def finish(self, number, title, budget):
            elapsed = time.perf_counter() - self.start
            self.expect(elapsed < budget, f"runtime {elapsed:.1f}s over {budget}s")
            verdict = "PASS" if not self.failed else "FAIL"
            with capsys.disabled():
                print(f"\ncriterion {number:>2}: {verdict}  {title} ({elapsed:.2f}s)")
                for what in self.failed:
                    print(f"    failed: {what}")
            assert not self.failed, "; ".join(self.failed)

    return Gate()


def test_criterion_01_rank_one_fixtures(gate):
    for name, t in (("zero", R0()), ("x", R1()), ("d+lam+c", Rc())):
        gate.expect(check_lsca(t).passed, f"{name} should pass")
    for name, t in (("lam*x", Bad1()), ("d*x", BadD())):
        rep = check_lsca(t)
        gate.expect(not rep.passed and not rep.failures[0].residual.is_zero(), f"{name} should fail")
    gate.expect(residual("left-symmetry", Bad1(), (0, 0, 0)).coeffs == (LAM**2 - MU**2,), "residual of lam*x")
    gate.finish(1, "rank-one fixtures", 1)


def test_criterion_02_rank_one_derivations(gate):
    for c in (0, 1, 2):
        dim = solve_derivations(Rc(c), 6).dimension
        gate.expect(dim == 0, f"R_c with c={c}: dimension {dim}")
    dim = solve_derivations(R0(), 1).dimension
    gate.expect(dim == 3, f"R0 bound 1: dimension {dim}")
    gate.finish(2, "derivations of the rank-one algebras", 5)


def test_criterion_03_subadjacent_soundness(gate):
    tables = {"R0": R0(), "R1": R1(), "R_c": Rc(), "RLW": RLW()}
    for i, d in enumerate(valid_datums()):
        tables[f"product {i}"] = build_unified(d).table
    for name, t in tables.items():
        gate.expect(check_lie(subadjacent(t)).passed, name)
    gate.finish(3, "sub-adjacent algebras are Lie", 10)


def test_criterion_04_iff_property(gate):
    rng = random.Random(4)
    datums = valid_datums() + [flag_to_datum(fd) for fd in invalid_flags()]
    datums += [flag_to_datum(sparse_flag(rng, R)) for R in algebra_bases() for _ in range(5)]
    datums += [flag_to_datum(random_flag(rng, R)) for R in algebra_bases() for _ in range(2)]
    gate.expect(len(datums) >= 20, "corpus too small")
    outcomes = set()
    for i, d in enumerate(datums):
        ok = check_extending_structure(d).passed
        outcomes.add(ok)
        gate.expect(ok == check_lsca(build_unified_unchecked(d).table).passed, f"datum {i}")
    gate.expect(outcomes == {True, False}, "corpus must contain passing and failing datums")
    gate.finish(4, "extending structure iff left-symmetric product", 60)


def test_criterion_05_flag_oracle(gate):
    rng = random.Random(5)
    flags = valid_flags() + invalid_flags()
    flags += [random_flag(rng, R0()) for _ in range(30)]
    flags += [sparse_flag(rng, R) for R in algebra_bases() for _ in range(7)]
    gate.expect(len(flags) - len(valid_flags()) - len(invalid_flags()) >= 50, "need 50 random datums")
    for i, fd in enumerate(flags):
        gate.expect(check_flag(fd).passed == check_extending_structure(flag_to_datum(fd)).passed, f"flag {i}")
    gate.finish(5, "flag conditions agree with the general conditions", 60)


def test_criterion_06_round_trip(gate):
    for i, d in enumerate(valid_datums()):
        gate.expect(extract_datum(build_unified(d)).same_tables(d), f"datum {i}")
    gate.finish(6, "extract after build is the identity", 10)


def test_criterion_07_lie_consistency(gate):
    for i, d in enumerate(valid_datums()):
        gate.expect(subadjacent(build_unified(d).table) == lie_unified_table(induced_lie_datum(d)), f"datum {i}")
    gate.finish(7, "commutator of the product equals the induced Lie data", 10)


def test_criterion_08_bicrossed_classification(gate):
    for xi, c in BICROSSED_REGIMES:
        for j, fd in enumerate(bicrossed_datums(xi, c)):
            shape_ok = fd.M.is_zero() and fd.P == LAM + D + xi
            gate.expect(shape_ok and check_flag(fd).passed, f"xi={xi}, c={c}, entry {j + 1}")
    reps = bicrossed_datums(1, 1)
    gate.expect(len(reps) == 8, "eight representatives for xi = c = 1")
    for i, j in itertools.combinations(range(len(reps)), 2):
        res = search_equiv(reps[i], reps[j], 3, DEFAULT_BETAS)
        gate.expect(res.status == "none-within-bound", f"pair ({i + 1},{j + 1}) gave {res.status}")
    gate.finish(8, "bicrossed representatives valid and pairwise inequivalent", 300)


def test_criterion_09_case_one_witness(gate):
    fd1, fd2 = virasoro_pair(1)
    x = fd1.Rm.gen(0)
    gate.expect(check_equiv(fd1, fd2, EquivWitness(x, 1)).passed, "explicit witness omega = x")
    res = search_equiv(fd1, fd2, 0, [1])
    gate.expect(res.found and res.witness.omega == x and res.witness.beta == 1, f"search gave {res.status}")
    gate.finish(9, "witness omega = x, beta = 1", 1)


def test_criterion_10_crossed_family(gate):
    fd, normal = crossed_sample(), crossed_sample_normal()
    rep = check_flag(fd)
    gate.expect(rep.passed, "sample fails the flag conditions: " + "; ".join(rep.lines()))
    rep = check_crossed(flag_to_datum(fd))
    gate.expect(rep.passed, "sample fails the crossed conditions: " + "; ".join(rep.lines()))
    m = fd.Rm
    L, W = m.gens()
    expected = (-D) * L + 2 * W  # f(d) = p0(-d) on L, g = h on W
    res = search_equiv(fd, normal, 3, [1])
    gate.expect(res.found and res.witness.omega == expected, f"search gave {res.status}")
    gate.expect(check_equiv(fd, normal, EquivWitness(expected, 1)).passed, "explicit witness")
    gate.finish(10, "crossed family sample and its normal form", 30)


def test_criterion_11_inner_semiquasicentroids(gate):
    rng = random.Random(11)
    for name, R in (("R_c", Rc(1)), ("RLW", RLW())):
        m = R.left
        for k in range(10):
            b = m.element([random_poly(rng, ("d", "d"), deg=2, density=0.6) for _ in range(m.rank)])
            T = inner_operator(R, b)
            gate.expect(check_semiquasicentroid(R, T).passed, f"{name} sample {k}")
            w = solve_inner_witness(R, T, 2)
            gate.expect(w is not None and inner_operator(R, w) == T, f"{name} witness {k}")
    gate.expect(check_semiquasicentroid(Rc(), inner_operator(Rc(), Rc().left.gen(0))).passed, "symbolic c")
    gate.finish(11, "inner semi-quasicentroids and witness recovery", 10)

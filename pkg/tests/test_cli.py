import json
import os
import subprocess
import sys

import pytest

from conformal_workbench.cli import main

from conftest import FIXTURES


def fx(name):
    return os.path.join(FIXTURES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_pass_and_fail(capsys):
    assert run(capsys, "check", fx("rc.json"))[:2] == (0, "left-symmetry: passed\n")
    code, out, _ = run(capsys, "check", fx("bad1.json"))
    assert code == 1
    assert out.splitlines() == [
        "left-symmetry: failed (1 failure)",
        "  (lam^2 - mu^2)*x at (x,x,x), law=left-symmetry",
    ]
    assert run(capsys, "check", fx("badd.json"))[0] == 1


def test_check_lie(capsys):
    code, out, _ = run(capsys, "check-lie", fx("r1.json"))
    assert code == 1
    assert "  2*x at (x,x), law=skew-symmetry" in out.splitlines()
    assert "  note: jacobi not checked: skew-symmetry fails" in out.splitlines()


def test_subadjacent(capsys):
    code, out, _ = run(capsys, "subadjacent", fx("rc.json"))
    assert code == 0
    assert "  x_lam x = (d + 2*lam)*x" in out.splitlines()
    assert run(capsys, "subadjacent", fx("bad1.json"))[0] == 1


def test_solve_derivations(capsys):
    assert run(capsys, "solve-derivations", fx("rc.json"), "--bind", "c=1")[:2] == (0, "dimension 0\n")
    code, out, _ = run(capsys, "solve-derivations", fx("r0.json"), "--deg", "1", "--json")
    assert code == 0 and json.loads(out)["dimension"] == 3
    code, _, err = run(capsys, "solve-derivations", fx("rc.json"))
    assert code == 2 and "bind c" in err


def test_datum_commands(capsys):
    assert run(capsys, "check-datum", fx("semidirect.json"))[0] == 0
    assert run(capsys, "check-flag", fx("virasoro_a.json"))[0] == 0
    assert run(capsys, "check-crossed", fx("crossed_rlw.json"))[0] == 0
    assert run(capsys, "check-bicrossed", fx("bicrossed_rc.json"))[0] == 0
    code, out, _ = run(capsys, "check-flag", fx("crossed_rlw_p1.json"))
    assert code == 1
    assert "  (-d*lam + d*mu - lam^2 + mu^2)*L at (W), law=lfd7" in out.splitlines()
    # shape errors are reported as failures
    code, out, _ = run(capsys, "check-crossed", fx("semidirect.json"))
    assert code == 1 and out.startswith("crossed: ")


def test_equiv(capsys):
    a, b = fx("virasoro_a.json"), fx("virasoro_b.json")
    code, out, _ = run(capsys, "equiv", a, b, "--omega", "x")
    assert code == 0 and out.splitlines()[0] == "equivalence: passed"
    code, out, _ = run(capsys, "equiv", a, b, "--omega", "0")
    assert code == 1 and "  (d + lam + 1)*x at (x), law=equiv-D" in out.splitlines()
    code, out, _ = run(capsys, "equiv", a, b, "--deg", "0", "--betas", "1")
    assert code == 0 and out.splitlines() == ["equiv: found", "  omega = x, beta = 1"]
    code, out, _ = run(capsys, "equiv", a, b, "--deg", "0", "--betas", "1", "--json")
    assert json.loads(out)["witness"] == {"omega": "x", "beta": "1"}
    assert run(capsys, "equiv", a, b, "--betas", "0")[0] == 2


def test_inner_witness_and_centroid(capsys):
    code, out, _ = run(capsys, "inner-witness", fx("rc.json"), "--bind", "c=1", "--map", "x=(1-lam)*x")
    assert (code, out) == (0, "witness b = x\n")
    code, out, _ = run(capsys, "inner-witness", fx("rc.json"), "--bind", "c=1", "--map", "x=lam*x", "--deg", "2")
    assert (code, out) == (1, "none-within-bound\n")
    assert run(capsys, "check-centroid", fx("rc.json"), "--map", "x=lam*x")[0] == 0
    assert run(capsys, "check-centroid", fx("rc.json"), "--map", "y=x")[0] == 2


def test_report(capsys):
    code, out, _ = run(capsys, "report", fx("rlw.json"), "--deg", "2")
    assert code == 0 and "derivations (bound 2): dimension 7" in out
    code, out, _ = run(capsys, "report", fx("virasoro_a.json"), "--json")
    data = json.loads(out)
    assert code == 0 and data["flag"]["passed"] and data["family"] == "neither"


def test_build_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "build-unified", fx("semidirect.json"), "--bind", "c=1", "--json")
    assert code == 0
    alg = tmp_path / "product.json"
    alg.write_text(out)
    assert run(capsys, "check", str(alg))[0] == 0
    code, out, _ = run(capsys, "extract-datum", str(alg), "--r-basis", "x")
    assert code == 0
    datum = tmp_path / "datum.json"
    datum.write_text(out)
    assert run(capsys, "check-datum", str(datum))[0] == 0
    obj = json.loads(out)
    assert obj["tables"]["l"] == {"(1,1)": ["(d + lam + 1)*y"]}


def test_extract_requires_closed_subalgebra(capsys, tmp_path):
    alg = tmp_path / "a.json"
    alg.write_text(json.dumps({"basis": ["a", "b"], "table": {"(1,1)": "b"}}))
    code, out, _ = run(capsys, "extract-datum", str(alg), "--r-basis", "a")
    assert code == 1 and "not a subalgebra" in out
    assert run(capsys, "extract-datum", str(alg), "--r-basis", "z")[0] == 2


def test_deterministic_output(capsys):
    first = run(capsys, "report", fx("rlw.json"), "--deg", "1", "--json")
    second = run(capsys, "report", fx("rlw.json"), "--deg", "1", "--json")
    assert first == second


@pytest.mark.parametrize("payload, fragment", [
    ({"basis": ["x"], "table": {"(1,1)": "lambda*x"}}, "undeclared identifier 'lambda'"),
    ({"basis": ["x"], "table": {"(1,2)": "x"}}, "out of range"),
    ({"basis": ["x"], "table": {"(1,1)": "x*x"}}, "not linear"),
    ({"basis": ["lam"]}, "bad basis name"),
    ({"basis": ["x"], "extra": 1}, "unknown keys"),
    ({"basis": ["x"], "params": ["d"]}, "reserved"),
])
def test_schema_errors(capsys, tmp_path, payload, fragment):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    code, _, err = run(capsys, "check", str(path))
    assert code == 2
    assert fragment in err


def test_bad_inputs(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(capsys, "check", str(path))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "check", fx("rc.json"), "--bind", "zz=1")[0] == 2
    assert run(capsys, "check", fx("rc.json"), "--bind", "c")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "solve-derivations", fx("r0.json"), "--deg", "-1")[0] == 2
    assert run(capsys, "check-flag", fx("semidirect.json"), "--bind", "c=1")[0] == 0


def test_flag_datum_needs_rank_one(capsys, tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"R": fx("rc.json"), "Q": {"basis": ["y", "z"]}, "tables": {}}))
    assert run(capsys, "check-flag", str(path))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "conformal_workbench", "check", fx("r0.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "left-symmetry: passed\n"

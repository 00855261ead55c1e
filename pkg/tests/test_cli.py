import json
import subprocess
import sys
from fractions import Fraction

import pytest

from quasi2norm.cli import run_cli
from quasi2norm.verify import recheck_witness
from quasi2norm import make_space

CROSS3 = '{"kind": "cross3"}'
ASYM = '{"kind": "mutant", "tag": "asymmetric"}'


def run(capsys, *argv):
    code = run_cli(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_verify_ok(capsys):
    code, out = run(capsys, "verify", CROSS3, "--seed", "42", "--trials", "200")
    assert code == 0 and out["all_pass"]
    assert out["config"]["seed"] == 42 and out["config"]["spec_hash"]


def test_verify_failure_has_recheckable_witness(capsys):
    code, out = run(capsys, "verify", ASYM, "--seed", "42", "--trials", "100")
    assert code == 3 and not out["all_pass"]
    assert out["axioms"]["2N2"]["status"] == "fail"
    spec = make_space(json.loads(ASYM))
    assert out["witnesses"] and all(recheck_witness(spec, w) for w in out["witnesses"])


def test_invariant_violation_exit_2(capsys):
    code, out = run(capsys, "verify", '{"kind": "affine", "a": "2/5", "b": "1"}')
    assert code == 2 and out["error"] == "invalid-input"


@pytest.mark.parametrize("argv", [
    ["verify", "{not json"],
    ["verify", '{"kind": "nope"}'],
    ["verify", CROSS3, "--seed", "-1"],
    ["verify", CROSS3, "--eps", "0"],
    ["verify", CROSS3, "--trials", "0"],
    ["bogus"],
    ["verify", "/nonexistent/spec.json"],
])
def test_usage_errors_exit_1(capsys, argv):
    assert run_cli(argv) == 1


def test_dimension_mismatch_is_invariant_violation(capsys):
    code, out = run(capsys, "norm-eval", CROSS3, "--x", "1,2", "--y", "1,2,3")
    assert code == 2 and out["error"] == "invalid-input"


def test_inconclusive_exit_4(capsys):
    code, out = run(capsys, "estimate-k", CROSS3, "--range", "0,0", "--trials", "10")
    assert code == 4 and out["error"] == "inconclusive"


def test_norm_eval(capsys):
    code, out = run(capsys, "norm-eval", CROSS3, "--x", "1,2,3", "--y", "4,5,6", "--eps", "1/1024")
    assert code == 0
    lo, hi = Fraction(out["lo"]), Fraction(out["hi"])
    assert lo * lo <= 54 <= hi * hi and hi - lo <= Fraction(1, 1024)


def test_estimate_k(capsys):
    code, out = run(capsys, "estimate-k", '{"kind": "cross3p", "p": "1/2"}', "--seed", "42", "--trials", "100")
    assert code == 0 and 1 <= Fraction(out["estimated_K"]) <= 2
    assert out["certified_K"] == "2/1"


def test_complete_eval(capsys, tmp_path):
    a = {"space": {"kind": "cross3"}, "rep": {"kind": "newton_sqrt", "k": "2", "dir": ["1", "0", "0"]}}
    b = {"space": {"kind": "cross3"}, "rep": {"kind": "const", "x": ["0", "1", "0"]}}
    pa = tmp_path / "a.json"
    pa.write_text(json.dumps(a))
    code, out = run(capsys, "complete-eval", str(pa), json.dumps(b))
    assert code == 0
    assert Fraction(out["lo"]) ** 2 <= 2 <= Fraction(out["hi"]) ** 2


def test_demo(capsys):
    code, out = run(capsys, "demo", "sqrt2")
    assert code == 0 and out["all_pass"]
    assert [c["name"] for c in out["checks"]] == [
        "sqrt2_norm", "sqrt2_plus_one", "embedding_isometry", "density", "complete_limit_round_trip"]


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.json"
    assert run_cli(["norm-eval", CROSS3, "--x", "1,0,0", "--y", "0,1,0", "--output", str(path)]) == 0
    assert json.loads(path.read_text())["lo"] == "1/1"


def test_console_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "quasi2norm", "verify", CROSS3, "--seed", "7", "--trials", "50"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a

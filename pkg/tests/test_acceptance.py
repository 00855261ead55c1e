"""One test per acceptance criterion; each records a PASS/FAIL line that the
terminal summary prints under "acceptance criteria"."""
import itertools
import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import pytest

import conftest
from oracles import grid_ratio_max, lagrange_area_sq, lp_ratio, newton_sqrt_bracket
from quasi2norm import (
    CompletionElem,
    Const,
    Geometric,
    NewtonSqrt,
    SamplerConfig,
    TwoNormSpec,
    VectorQ,
    are_equivalent,
    chat_norm,
    class_equal,
    complete_limit,
    embed,
    estimate_K,
    make_space,
    norm_eval,
    norm_sq_cross,
    recheck_witness,
    verify_axioms,
)
from quasi2norm.cli import run_cli
from quasi2norm.completion import density_check
from quasi2norm.norms import upper_factor
from quasi2norm.sequences import compose_moduli
from quasi2norm.verify import estimate_K_detail

E1, E2, E3 = (VectorQ.basis(i) for i in range(3))
C3 = TwoNormSpec.cross3()
EPS20 = Fraction(1, 2 ** 20)

# seed-42 regression value; the grid oracle and mpmath ratio below vouch for it
AC3_PINNED = Fraction(5421779251552616481, 3879028559772613010)


@pytest.fixture
def record(request):
    label = request.node.name.replace("test_", "").upper()
    state = {"ok": False, "note": ""}
    yield state
    outcome = "PASS" if state["ok"] else "FAIL"
    conftest.ACCEPTANCE_LINES.append(f"{outcome} {label} {state['note']}".rstrip())


def test_ac1_axiom_suite(record):
    cfg = SamplerConfig(seed=42, trials=1000, component_range=(Fraction(-10), Fraction(10)), denominator_bound=64)
    t0 = time.perf_counter()
    rep = verify_axioms(C3, cfg)
    elapsed = time.perf_counter() - t0
    assert rep.all_pass
    for name in ("2N1", "2N2", "2N3", "2N4star"):
        assert rep.axioms[name].status == "pass"
    assert rep.axioms["2N2"].mode == "exact-squares"
    assert rep.axioms["2N3"].mode == "exact-squares"
    assert elapsed < 10
    record.update(ok=True, note=f"({elapsed:.2f}s)")


@pytest.mark.parametrize("a, b", [(Fraction(1, 2), Fraction(1, 2)), (1, 2), (3, 5)])
def test_ac2_affine_certificate_gap(record, a, b):
    spec = TwoNormSpec.affine(a, b, C3)
    cfg = SamplerConfig(seed=42, trials=1000)
    assert spec.certified_K == Fraction(a) + Fraction(b)
    est = estimate_K(spec, cfg)
    assert est <= 1 <= spec.certified_K
    if spec.certified_K > 1:
        assert est < spec.certified_K
    record.update(ok=True, note=f"a={a} b={b} est={float(est):.6f} certified={spec.certified_K}")


def test_ac3_quasi_fixture(record):
    spec = TwoNormSpec.cross3p(Fraction(1, 2))
    det = estimate_K_detail(spec, SamplerConfig(seed=42, trials=1000))
    assert det.value == AC3_PINNED
    assert 1 < det.value <= 2
    assert grid_ratio_max(Fraction(1, 2)) == 2  # sup attained on the {-1,0,1} grid equals the certificate
    true_ratio = lp_ratio(det.x.components, det.y.components, det.z.components, Fraction(1, 2))
    value = mpmath.mpf(det.value.numerator) / det.value.denominator
    assert value <= true_ratio < value + mpmath.mpf("1e-5")
    record.update(ok=True, note=f"K_est={det.value} (~{float(det.value):.8f})")


X = VectorQ([1, 2, 3])
FAMILY = [Const(X), Geometric(X, VectorQ([1, -1, 2]), Fraction(1, 2)),
          Geometric(X, VectorQ([0, 3, 1]), Fraction(1, 3)), NewtonSqrt(2, E1, 1), NewtonSqrt(2, E1, 2)]


def test_ac4_equivalence_relation(record):
    verdicts = {(i, j): are_equivalent(C3, FAMILY[i], FAMILY[j])
                for i in range(len(FAMILY)) for j in range(len(FAMILY))}
    assert all(v.status != "unknown" for v in verdicts.values())
    for i in range(len(FAMILY)):
        assert verdicts[i, i].equivalent
    for (i, j), v in verdicts.items():
        assert v.status == verdicts[j, i].status
    checked = 0
    K = C3.certified_K
    for i, j, k in itertools.permutations(range(len(FAMILY)), 3):
        if not (verdicts[i, j].equivalent and verdicts[j, k].equivalent):
            continue
        assert verdicts[i, k].equivalent
        nu = compose_moduli(verdicts[i, j].modulus, verdicts[j, k].modulus, K)
        for eps in (Fraction(1, 2 ** 5), Fraction(1, 2 ** 10), Fraction(1, 2 ** 20)):
            n = nu(eps)
            for m in (n, n + 1, n + 4):
                d = FAMILY[i].term(m) - FAMILY[k].term(m)
                assert d.norm_sq() <= eps * eps
                assert all(norm_sq_cross(d, e) <= eps * eps for e in (E1, E2, E3))
        checked += 1
    assert checked == 6  # ordered triples inside {Const, Geometric, Geometric}
    record.update(ok=True, note=f"{checked} transitive triples checked")


def test_ac5_embedding_isometry(record):
    rng = random.Random(5)

    def vec():
        return VectorQ([Fraction(rng.randint(-640, 640), rng.randint(1, 64)) for _ in range(3)])

    for _ in range(100):
        x, y = vec(), vec()
        assert chat_norm(embed(C3, x), embed(C3, y), EPS20) == norm_eval(C3, x, y, EPS20)
    record.update(ok=True, note="100 pairs")


def test_ac6_sqrt2_demo(record):
    t0 = time.perf_counter()
    iv = chat_norm(CompletionElem(C3, NewtonSqrt(2, E1, 1)), embed(C3, E2), EPS20)
    elapsed = time.perf_counter() - t0
    lo, hi = newton_sqrt_bracket(2, Fraction(1, 2 ** 60))
    assert iv.width <= EPS20
    assert iv.lo <= lo and hi <= iv.hi
    assert elapsed < 1
    record.update(ok=True, note=f"[{float(iv.lo):.9f}, {float(iv.hi):.9f}] ({elapsed:.3f}s)")


def test_ac7_representative_independence(record):
    a1 = CompletionElem(C3, NewtonSqrt(2, E1, 1))
    a2 = CompletionElem(C3, NewtonSqrt(2, E1, 2))
    z = embed(C3, E2)
    for k in (5, 10, 20, 30):
        eps = Fraction(1, 2 ** k)
        assert chat_norm(a1, z, eps).overlaps(chat_norm(a2, z, eps))
    record.update(ok=True)


def test_ac8_completeness_round_trip(record):
    rep = NewtonSqrt(2, E1, 1)
    scale = upper_factor(C3)
    lim = complete_limit(C3, lambda n: embed(C3, rep.term(n)), lambda e: rep.modulus(e / scale),
                         x0_family=True)
    verdict = class_equal(lim, CompletionElem(C3, rep), 30)
    assert verdict.equivalent
    a = CompletionElem(C3, rep)
    for k in range(1, 21):
        assert density_check(a, Fraction(1, 2 ** k))["ok"]
    record.update(ok=True, note="budget 30, density k=1..20")


def test_ac9_negative_controls(record, capsys):
    spec_json = '{"kind": "mutant", "tag": "asymmetric"}'
    assert run_cli(["verify", spec_json, "--seed", "42", "--trials", "1000"]) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["axioms"]["2N2"]["status"] == "fail"
    spec = make_space(json.loads(spec_json))
    witnesses = [w for w in out["witnesses"] if w["axiom"] == "2N2"]
    assert witnesses and all(recheck_witness(spec, w) for w in witnesses)
    # independent exact oracle: |x×y|^2 (1 + x1^2/|x|^2) differs under swapping
    w = witnesses[0]
    x, y = VectorQ.from_json(w["x"]), VectorQ.from_json(w["y"])
    area = lagrange_area_sq(x.components, y.components)
    assert area * (1 + x.components[0] ** 2 / x.norm_sq()) != area * (1 + y.components[0] ** 2 / y.norm_sq())
    assert run_cli(["verify", '{"kind": "affine", "a": "2/5", "b": "1"}']) == 2
    assert "1/2" in json.loads(capsys.readouterr().out)["message"]
    record.update(ok=True)


def test_ac10_cli_determinism(record, tmp_path):
    invocations = [
        ["verify", '{"kind": "cross3"}', "--seed", "42", "--trials", "1000"],
        ["verify", '{"kind": "mutant", "tag": "asymmetric"}', "--seed", "42", "--trials", "200"],
        ["estimate-k", '{"kind": "cross3p", "p": "1/2"}', "--seed", "42", "--trials", "200"],
        ["demo", "sqrt2"],
    ]
    for argv in invocations:
        runs = [subprocess.run([sys.executable, "-m", "quasi2norm", *argv], capture_output=True)
                for _ in range(2)]
        assert runs[0].stdout and runs[0].stdout == runs[1].stdout
        assert runs[0].returncode == runs[1].returncode
    record.update(ok=True, note=f"{len(invocations)} invocations")

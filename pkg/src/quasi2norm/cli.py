"""Command-line front end.

Exit codes::

    0  success / every check passed
    1  malformed JSON or arguments
    2  input violates a construction invariant (e.g. affine a < 1/2)
    3  verification failure
    4  inconclusive (unknown verdict, degenerate sampling)

Output is JSON with sorted keys, so identical invocations give identical
bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Sequence

from .algebra import Interval, VectorQ, as_rational, fmt_rational
from .completion import (
    CompletionElem,
    approximate_by_X0,
    chat_combine,
    chat_norm,
    check_embedding_isometry,
    class_equal,
    complete_limit,
    density_check,
    embed,
)
from .errors import (
    DimensionMismatch,
    DomainError,
    InconclusiveSampling,
    ParameterRangeError,
)
from .norms import make_space, norm_eval, upper_factor
from .sequences import NewtonSqrt
from .verify import SamplerConfig, estimate_K, verify_axioms

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_INPUT = 2
EXIT_VERIFY_FAIL = 3
EXIT_INCONCLUSIVE = 4

DEFAULT_EPS = "1/1048576"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational_arg(text: str) -> Fraction:
    try:
        q = as_rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return q


def _positive(text: str) -> Fraction:
    q = _rational_arg(text)
    if q <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return q


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("seed must be an integer") from exc
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("range must be 'lo,hi'")
    return _rational_arg(parts[0]), _rational_arg(parts[1])


def _vector(text: str) -> VectorQ:
    try:
        return VectorQ.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quasi2norm", description="Quasi 2-norms, axiom checks and completions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sampling=False):
        p.add_argument("--eps", type=_positive, default=_positive(DEFAULT_EPS))
        p.add_argument("--output", default="-", help="output path, '-' for stdout")
        if sampling:
            p.add_argument("--seed", type=_seed, default=0)
            p.add_argument("--trials", type=int, default=1000)
            p.add_argument("--range", type=_range, default=(Fraction(-10), Fraction(10)),
                           dest="component_range")
            p.add_argument("--denominator-bound", type=int, default=64)

    p = sub.add_parser("verify", help="check the 2-norm axioms on seeded samples")
    p.add_argument("spec")
    p.add_argument("--K", type=_rational_arg, default=None, help="override the quasi constant for 2N4*")
    common(p, sampling=True)

    p = sub.add_parser("estimate-k", help="sampled lower bound on the minimal quasi constant")
    p.add_argument("spec")
    common(p, sampling=True)

    p = sub.add_parser("norm-eval", help="enclose ||x, y||")
    p.add_argument("spec")
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--y", type=_vector, required=True)
    common(p)

    p = sub.add_parser("complete-eval", help="enclose the completion norm of two classes")
    p.add_argument("elem_a")
    p.add_argument("elem_b")
    common(p)

    p = sub.add_parser("demo", help="bundled walkthroughs")
    p.add_argument("name", choices=["sqrt2"])
    common(p)
    return parser


def _load_json(arg: str) -> Any:
    text = arg if arg.lstrip().startswith("{") else Path(arg).read_text()
    return json.loads(text)


def _sampler(ns) -> SamplerConfig:
    if ns.trials <= 0:
        raise UsageError("--trials must be positive")
    if ns.denominator_bound <= 0:
        raise UsageError("--denominator-bound must be positive")
    return SamplerConfig(seed=ns.seed, trials=ns.trials, component_range=ns.component_range,
                         denominator_bound=ns.denominator_bound)


def _interval_report(iv: Interval, config: dict[str, Any]) -> dict[str, Any]:
    return {**iv.to_json(), "width": fmt_rational(iv.width), "config": config}


def cmd_verify(ns) -> tuple[int, dict[str, Any]]:
    spec = make_space(_load_json(ns.spec))
    cfg = _sampler(ns)
    report = verify_axioms(spec, cfg, K=ns.K, eps=ns.eps)
    out = report.to_json()
    out["config"]["eps"] = fmt_rational(ns.eps)
    out["config"]["spec_hash"] = spec.digest()
    return (EXIT_OK if report.all_pass else EXIT_VERIFY_FAIL), out


def cmd_estimate(ns) -> tuple[int, dict[str, Any]]:
    spec = make_space(_load_json(ns.spec))
    cfg = _sampler(ns)
    est = estimate_K(spec, cfg, eps=ns.eps)
    config = {**cfg.to_json(), "eps": fmt_rational(ns.eps), "spec_hash": spec.digest()}
    return EXIT_OK, {"estimated_K": fmt_rational(est), "certified_K": fmt_rational(spec.certified_K),
                     "config": config}


def cmd_norm_eval(ns) -> tuple[int, dict[str, Any]]:
    spec = make_space(_load_json(ns.spec))
    iv = norm_eval(spec, ns.x, ns.y, ns.eps)
    config = {"eps": fmt_rational(ns.eps), "spec_hash": spec.digest(),
              "x": ns.x.to_json(), "y": ns.y.to_json()}
    return EXIT_OK, _interval_report(iv, config)


def cmd_complete_eval(ns) -> tuple[int, dict[str, Any]]:
    a = CompletionElem.from_json(_load_json(ns.elem_a))
    b = CompletionElem.from_json(_load_json(ns.elem_b))
    iv = chat_norm(a, b, ns.eps)
    config = {"eps": fmt_rational(ns.eps), "spec_hash": a.space.digest(),
              "a": a.rep.to_json(), "b": b.rep.to_json()}
    return EXIT_OK, _interval_report(iv, config)


def _newton_sqrt_enclosure(k: Fraction, width: Fraction) -> Interval:
    # s >= sqrt(k) >= k/s once s >= sqrt(k); iterate until the bracket is tight
    s = Fraction(k)
    while True:
        s = (s + k / s) / 2
        if s - k / s <= width:
            return Interval(k / s, s)


def sqrt2_demo(eps: Fraction) -> tuple[int, dict[str, Any]]:
    data = json.loads(resources.files("quasi2norm").joinpath("data/sqrt2.json").read_text())
    a = CompletionElem.from_json(data["element"])
    space = a.space
    z = embed(space, VectorQ.from_json(data["test_vector"]))
    checks: list[dict[str, Any]] = []

    iv = chat_norm(a, z, eps)
    oracle = _newton_sqrt_enclosure(Fraction(2), eps / 64)
    checks.append({"name": "sqrt2_norm", "interval": iv.to_json(), "oracle": oracle.to_json(),
                   "ok": iv.width <= eps and iv.contains_interval(oracle)})

    e1 = embed(space, VectorQ.basis(0))
    shifted = chat_combine("add", a, e1)
    iv2 = chat_norm(shifted, z, eps)
    oracle2 = Interval(oracle.lo + 1, oracle.hi + 1)
    checks.append({"name": "sqrt2_plus_one", "interval": iv2.to_json(), "oracle": oracle2.to_json(),
                   "ok": iv2.width <= eps and iv2.overlaps(oracle2)})

    pairs = [(VectorQ.from_json(x), VectorQ.from_json(y)) for x, y in data["isometry_pairs"]]
    iso = check_embedding_isometry(space, pairs, eps)
    checks.append({"name": "embedding_isometry", "pairs": iso, "ok": all(r["equal"] for r in iso)})

    dens = density_check(a, eps)
    checks.append({"name": "density", **dens})

    rep = a.rep
    assert isinstance(rep, NewtonSqrt)
    scale = upper_factor(space)
    family = lambda n: embed(space, rep.term(n))  # noqa: E731
    fam_mod = lambda e: rep.modulus(e / scale)  # noqa: E731
    limit = complete_limit(space, family, fam_mod, x0_family=True)
    verdict = class_equal(limit, a)
    checks.append({"name": "complete_limit_round_trip", "verdict": verdict.to_json(),
                   "approximant": approximate_by_X0(limit, eps).to_json(),
                   "ok": verdict.equivalent})

    report = {"demo": "sqrt2", "element": a.to_json(), "checks": checks,
              "config": {"eps": fmt_rational(eps), "spec_hash": space.digest()},
              "all_pass": all(c["ok"] for c in checks)}
    if verdict.status == "unknown":
        return EXIT_INCONCLUSIVE, report
    return (EXIT_OK if report["all_pass"] else EXIT_VERIFY_FAIL), report


def cmd_demo(ns) -> tuple[int, dict[str, Any]]:
    return sqrt2_demo(ns.eps)


COMMANDS = {
    "verify": cmd_verify,
    "estimate-k": cmd_estimate,
    "norm-eval": cmd_norm_eval,
    "complete-eval": cmd_complete_eval,
    "demo": cmd_demo,
}


def _emit(payload: dict[str, Any], output: str) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    output = "-"
    try:
        ns = parser.parse_args(argv)
        output = ns.output
        code, payload = COMMANDS[ns.command](ns)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, output)
        return EXIT_USAGE
    except (json.JSONDecodeError, OSError) as exc:
        _emit({"error": "malformed-input", "message": str(exc)}, output)
        return EXIT_USAGE
    except (ParameterRangeError, DimensionMismatch, DomainError) as exc:
        _emit({"error": "invalid-input", "message": str(exc)}, output)
        return EXIT_INVALID_INPUT
    except InconclusiveSampling as exc:
        _emit({"error": "inconclusive", "message": str(exc)}, output)
        return EXIT_INCONCLUSIVE
    except (ValueError, TypeError, KeyError) as exc:
        _emit({"error": "malformed-input", "message": str(exc)}, output)
        return EXIT_USAGE
    _emit(payload, output)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_cli(argv)

"""Seeded property checks of the 2-norm axioms.

Axiom labels follow the usual numbering::

    2N1      ||x, y|| = 0  <=>  x, y linearly dependent
    2N2      ||x, y|| = ||y, x||
    2N3      ||a x, y|| = |a| ||x, y||
    2N4star  ||x + y, z|| <= K (||x, z|| + ||y, z||)

A violation is reported only when it is certified: either by exact rational
arithmetic on squared values, or by interval enclosures that are disjoint in
the violating direction.  Overlapping enclosures are refined by halving eps
up to ``refine_depth`` times and, if still overlapping, counted as a pass at
tolerance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .algebra import (
    Interval,
    RationalLike,
    VectorQ,
    as_rational,
    fmt_rational,
    norm_sq_cross,
)
from .errors import InconclusiveSampling
from .norms import (
    TwoNormSpec,
    continuity_delta,
    core_spec,
    exact_square,
    norm_eval,
)

DEFAULT_EPS = Fraction(1, 1 << 20)
RECHECK_EPS = Fraction(1, 1 << 40)
AXIOMS = ("2N1", "2N2", "2N3", "2N4star")


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    trials: int = 1000
    component_range: tuple[Fraction, Fraction] = (Fraction(-10), Fraction(10))
    denominator_bound: int = 64

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        lo, hi = (as_rational(v) for v in self.component_range)
        if lo > hi:
            raise ValueError("component_range must satisfy lo <= hi")
        object.__setattr__(self, "component_range", (lo, hi))
        if self.denominator_bound <= 0:
            raise ValueError("denominator_bound must be positive")

    def to_json(self) -> dict[str, Any]:
        lo, hi = self.component_range
        return {
            "seed": self.seed,
            "trials": self.trials,
            "component_range": [fmt_rational(lo), fmt_rational(hi)],
            "denominator_bound": self.denominator_bound,
        }


class Sampler:
    """Deterministic stream of bounded-denominator rationals."""

    def __init__(self, cfg: SamplerConfig, lo: Fraction | None = None, hi: Fraction | None = None):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.lo = cfg.component_range[0] if lo is None else lo
        self.hi = cfg.component_range[1] if hi is None else hi

    def rational(self) -> Fraction:
        den = self.rng.randint(1, self.cfg.denominator_bound)
        lo_num = -((-self.lo * den).__floor__())
        hi_num = (self.hi * den).__floor__()
        if lo_num > hi_num:
            return self.lo
        return Fraction(self.rng.randint(lo_num, hi_num), den)

    def vector(self, dim: int = 3) -> VectorQ:
        return VectorQ(self.rational() for _ in range(dim))


@dataclass
class AxiomVerdict:
    status: str = "pass"
    mode: str = "interval"
    checked: int = 0
    violations: int = 0
    unresolved: int = 0
    witness: Optional[dict[str, Any]] = None

    def to_json(self) -> dict[str, Any]:
        out = {
            "status": self.status,
            "mode": self.mode,
            "checked": self.checked,
            "violations": self.violations,
            "unresolved": self.unresolved,
        }
        return out


@dataclass
class AxiomReport:
    spec: TwoNormSpec
    cfg: SamplerConfig
    axioms: dict[str, AxiomVerdict]
    claimed_K: Fraction
    estimated_K: Optional[Fraction]
    eps: Fraction
    witnesses: list[dict[str, Any]] = field(default_factory=list)

    @property
    def certified_K(self) -> Fraction:
        return self.spec.certified_K

    @property
    def all_pass(self) -> bool:
        return all(v.status == "pass" for v in self.axioms.values())

    def to_json(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_json(),
            "spec_hash": self.spec.digest(),
            "conforming": self.spec.conforming,
            "axioms": {name: v.to_json() for name, v in self.axioms.items()},
            "witnesses": self.witnesses,
            "estimated_K": None if self.estimated_K is None else fmt_rational(self.estimated_K),
            "certified_K": fmt_rational(self.certified_K),
            "claimed_K": fmt_rational(self.claimed_K),
            "seed": self.cfg.seed,
            "trials": self.cfg.trials,
            "eps": fmt_rational(self.eps),
            "config": self.cfg.to_json(),
            "all_pass": self.all_pass,
        }


def _refine_pair(fa, fb, eps: Fraction, depth: int):
    """Evaluate two enclosures, halving eps while they overlap.

    Returns ``(disjoint, A, B, eps_used)``.
    """
    e = eps
    for _ in range(depth + 1):
        A, B = fa(e), fb(e)
        if not A.overlaps(B):
            return True, A, B, e
        e /= 2
    return False, A, B, e * 2


def _triangle_holds_exact(A: Fraction, B: Fraction, C: Fraction, K: Fraction) -> bool:
    """Decide sqrt(A) <= K (sqrt(B) + sqrt(C)) exactly."""
    t = A - K * K * (B + C)
    if t <= 0:
        return True
    return t * t <= 4 * K ** 4 * B * C


def _jsonable(val: Any) -> Any:
    if isinstance(val, (VectorQ, Interval)):
        return val.to_json()
    if isinstance(val, Fraction):
        return fmt_rational(val)
    if isinstance(val, dict):
        return {k: _jsonable(v) for k, v in val.items()}
    return val


def _witness(axiom: str, **items: Any) -> dict[str, Any]:
    return {"axiom": axiom, **{k: _jsonable(v) for k, v in items.items()}}


class _Checker:
    def __init__(self, spec: TwoNormSpec, K: Fraction, eps: Fraction, depth: int):
        self.spec = spec
        self.K = K
        self.eps = eps
        self.depth = depth
        self.exact = exact_square(spec, VectorQ.basis(0), VectorQ.basis(1)) is not None
        mode = "exact-squares" if self.exact else "interval"
        self.verdicts = {name: AxiomVerdict(mode=mode) for name in AXIOMS}
        self.witnesses: list[dict[str, Any]] = []

    def _fail(self, axiom: str, witness: dict[str, Any]) -> None:
        v = self.verdicts[axiom]
        v.violations += 1
        v.status = "fail"
        if v.witness is None:
            v.witness = witness
            self.witnesses.append(witness)

    # 2N1 ------------------------------------------------------------------
    def dependent(self, x: VectorQ, alpha: Fraction) -> None:
        v = self.verdicts["2N1"]
        v.checked += 1
        y = x.scale(alpha)
        if self.exact:
            sq = exact_square(self.spec, x, y)
            if sq != 0:
                self._fail("2N1", _witness("2N1", case="dependent", x=x, y=y, alpha=alpha,
                                           squares={"xy": sq}))
            return
        enc = norm_eval(self.spec, x, y, self.eps)
        if enc.lo > 0:
            self._fail("2N1", _witness("2N1", case="dependent", x=x, y=y, alpha=alpha,
                                       enclosures={"xy": enc}, eps=self.eps))

    def independent(self, x: VectorQ, y: VectorQ) -> None:
        if norm_sq_cross(x, y) == 0:
            return
        v = self.verdicts["2N1"]
        v.checked += 1
        if self.exact:
            sq = exact_square(self.spec, x, y)
            if sq == 0:
                self._fail("2N1", _witness("2N1", case="independent", x=x, y=y, squares={"xy": sq}))
            return
        e = self.eps
        for _ in range(self.depth + 1):
            enc = norm_eval(self.spec, x, y, e)
            if enc.lo > 0:
                return
            if enc.hi == 0:
                self._fail("2N1", _witness("2N1", case="independent", x=x, y=y,
                                           enclosures={"xy": enc}, eps=e))
                return
            e /= 2
        v.unresolved += 1

    # 2N2 ------------------------------------------------------------------
    def symmetry(self, x: VectorQ, y: VectorQ) -> None:
        v = self.verdicts["2N2"]
        v.checked += 1
        if self.exact:
            a, b = exact_square(self.spec, x, y), exact_square(self.spec, y, x)
            if a != b:
                self._fail("2N2", _witness("2N2", x=x, y=y, squares={"xy": a, "yx": b}))
            return
        A = norm_eval(self.spec, x, y, self.eps)
        B = norm_eval(self.spec, y, x, self.eps)
        if A == B:
            return
        spec = self.spec
        disjoint, A, B, e = _refine_pair(lambda e: norm_eval(spec, x, y, e),
                                         lambda e: norm_eval(spec, y, x, e), self.eps, self.depth)
        if disjoint:
            self._fail("2N2", _witness("2N2", x=x, y=y, enclosures={"xy": A, "yx": B}, eps=e))
        elif A != B:
            v.unresolved += 1

    # 2N3 ------------------------------------------------------------------
    def homogeneity(self, x: VectorQ, y: VectorQ, alpha: Fraction) -> None:
        v = self.verdicts["2N3"]
        v.checked += 1
        ax = x.scale(alpha)
        if self.exact:
            lhs = exact_square(self.spec, ax, y)
            rhs = alpha ** 2 * exact_square(self.spec, x, y)
            if lhs != rhs:
                self._fail("2N3", _witness("2N3", x=x, y=y, alpha=alpha,
                                           squares={"ax_y": lhs, "alpha2_xy": rhs}))
            return
        spec = self.spec
        disjoint, A, B, e = _refine_pair(lambda e: norm_eval(spec, ax, y, e),
                                         lambda e: norm_eval(spec, x, y, e).scale(abs(alpha)),
                                         self.eps, self.depth)
        if disjoint:
            self._fail("2N3", _witness("2N3", x=x, y=y, alpha=alpha,
                                       enclosures={"ax_y": A, "abs_alpha_xy": B}, eps=e))

    # 2N4* -----------------------------------------------------------------
    def triangle(self, x: VectorQ, y: VectorQ, z: VectorQ) -> None:
        v = self.verdicts["2N4star"]
        v.checked += 1
        K = self.K
        if self.exact:
            A = exact_square(self.spec, x + y, z)
            B = exact_square(self.spec, x, z)
            C = exact_square(self.spec, y, z)
            if not _triangle_holds_exact(A, B, C, K):
                self._fail("2N4star", _witness("2N4star", x=x, y=y, z=z, K=K,
                                               squares={"xpy_z": A, "x_z": B, "y_z": C}))
            return
        e = self.eps
        for _ in range(self.depth + 1):
            lhs = norm_eval(self.spec, x + y, z, e)
            rhs = (norm_eval(self.spec, x, z, e) + norm_eval(self.spec, y, z, e)).scale(K)
            if lhs.lo > rhs.hi:
                self._fail("2N4star", _witness("2N4star", x=x, y=y, z=z, K=K,
                                               enclosures={"lhs": lhs, "rhs": rhs}, eps=e))
                return
            if lhs.hi <= rhs.lo:
                return
            e /= 2
        v.unresolved += 1


def verify_axioms(
    spec: TwoNormSpec,
    cfg: SamplerConfig,
    *,
    K: Optional[RationalLike] = None,
    eps: RationalLike = DEFAULT_EPS,
    refine_depth: int = 8,
) -> AxiomReport:
    """Run every axiom check over ``cfg.trials`` seeded samples.

    ``K`` overrides the quasi constant used for 2N4star (default: the
    spec's certified K).  A failing spec produces fail verdicts, never an
    exception.
    """
    claimed = spec.certified_K if K is None else as_rational(K)
    eps = as_rational(eps)
    chk = _Checker(spec, claimed, eps, refine_depth)
    dim = spec.dim

    # fixed independent pairs: measure-zero failures such as a norm vanishing
    # on (e1, e2) are never hit by random sampling
    for i in range(dim):
        for j in range(dim):
            if i != j:
                chk.independent(VectorQ.basis(i, dim), VectorQ.basis(j, dim))
    chk.dependent(VectorQ.zero(dim), Fraction(1))

    smp = Sampler(cfg)
    for _ in range(cfg.trials):
        x, y, z = smp.vector(dim), smp.vector(dim), smp.vector(dim)
        alpha = smp.rational()
        chk.dependent(x, alpha)
        chk.independent(x, y)
        chk.symmetry(x, y)
        chk.homogeneity(x, y, alpha)
        chk.triangle(x, y, z)

    try:
        est = estimate_K(spec, cfg, eps=eps)
    except InconclusiveSampling:
        est = None
    return AxiomReport(spec=spec, cfg=cfg, axioms=chk.verdicts, claimed_K=claimed,
                       estimated_K=est, eps=eps, witnesses=chk.witnesses)


def _vec(data) -> VectorQ:
    return VectorQ.from_json(data)


def recheck_witness(spec: TwoNormSpec, witness: dict[str, Any], eps: RationalLike = RECHECK_EPS) -> bool:
    """Re-evaluate a witness from scratch; True iff it still certifies a violation."""
    eps = as_rational(eps)
    axiom = witness["axiom"]
    exact = exact_square(spec, VectorQ.basis(0), VectorQ.basis(1)) is not None
    if axiom == "2N1":
        x, y = _vec(witness["x"]), _vec(witness["y"])
        dependent = norm_sq_cross(x, y) == 0
        if exact:
            sq = exact_square(spec, x, y)
            return sq != 0 if dependent else sq == 0
        enc = norm_eval(spec, x, y, eps)
        return enc.lo > 0 if dependent else enc.hi == 0
    if axiom == "2N2":
        x, y = _vec(witness["x"]), _vec(witness["y"])
        if exact:
            return exact_square(spec, x, y) != exact_square(spec, y, x)
        return not norm_eval(spec, x, y, eps).overlaps(norm_eval(spec, y, x, eps))
    if axiom == "2N3":
        x, y = _vec(witness["x"]), _vec(witness["y"])
        alpha = as_rational(witness["alpha"])
        if exact:
            return exact_square(spec, x.scale(alpha), y) != alpha ** 2 * exact_square(spec, x, y)
        A = norm_eval(spec, x.scale(alpha), y, eps)
        B = norm_eval(spec, x, y, eps).scale(abs(alpha))
        return not A.overlaps(B)
    if axiom == "2N4star":
        x, y, z = _vec(witness["x"]), _vec(witness["y"]), _vec(witness["z"])
        K = as_rational(witness["K"])
        if exact:
            return not _triangle_holds_exact(exact_square(spec, x + y, z), exact_square(spec, x, z),
                                             exact_square(spec, y, z), K)
        lhs = norm_eval(spec, x + y, z, eps)
        rhs = (norm_eval(spec, x, z, eps) + norm_eval(spec, y, z, eps)).scale(K)
        return lhs.lo > rhs.hi
    raise ValueError(f"unknown axiom {axiom!r}")


@dataclass(frozen=True)
class KEstimate:
    value: Fraction
    x: VectorQ
    y: VectorQ
    z: VectorQ
    samples: int
    skipped: int


def estimate_K_detail(spec: TwoNormSpec, cfg: SamplerConfig, *, eps: RationalLike = DEFAULT_EPS) -> KEstimate:
    """Like :func:`estimate_K` but also returns the maximising sample."""
    eps = as_rational(eps)
    core = core_spec(spec)
    smp = Sampler(cfg)
    best: Optional[KEstimate] = None
    skipped = 0
    for _ in range(cfg.trials):
        x, y, z = smp.vector(spec.dim), smp.vector(spec.dim), smp.vector(spec.dim)
        den = norm_eval(core, x, z, eps) + norm_eval(core, y, z, eps)
        if den.lo <= 0:
            skipped += 1
            continue
        ratio = norm_eval(core, x + y, z, eps).lo / den.hi
        if best is None or ratio > best.value:
            best = KEstimate(ratio, x, y, z, 0, 0)
    if best is None:
        raise InconclusiveSampling("every sampled denominator enclosure contained 0")
    return KEstimate(best.value, best.x, best.y, best.z, cfg.trials - skipped, skipped)


def estimate_K(spec: TwoNormSpec, cfg: SamplerConfig, *, eps: RationalLike = DEFAULT_EPS) -> Fraction:
    """Certified lower bound on the minimal quasi constant, maximised over samples.

    Each sample contributes ``lo(||x+y,z||) / hi(||x,z|| + ||y,z||)``, which is
    at most the true ratio.  Positive rescalings are stripped first since
    they leave the ratio unchanged, so ``Scaled(c, base)`` and ``base``
    return identical values.
    """
    return estimate_K_detail(spec, cfg, eps=eps).value


def probe_uniform_continuity(
    spec: TwoNormSpec,
    radius: RationalLike,
    eps: RationalLike,
    cfg: SamplerConfig,
    *,
    refine_depth: int = 8,
) -> Fraction:
    """Return delta certifying ``| ||a,b|| - ||a',b'|| | < eps`` on the cube
    ``[-radius, radius]^3`` whenever ``|a-a'|, |b-b'| <= delta``.

    delta comes from :func:`norms.continuity_delta`; it is then checked on
    ``cfg.trials`` seeded quadruples.  If a sample fails to certify, delta
    is halved and the check restarts.
    """
    radius, eps = as_rational(radius), as_rational(eps)
    delta = continuity_delta(spec, radius, eps)
    tight = eps / 16
    for _ in range(refine_depth + 1):
        smp = Sampler(cfg, -radius, radius)
        ok = True
        for _ in range(cfg.trials):
            a, b = smp.vector(spec.dim), smp.vector(spec.dim)
            a2 = _perturb(smp, a, delta, radius)
            b2 = _perturb(smp, b, delta, radius)
            diff = norm_eval(spec, a, b, tight) - norm_eval(spec, a2, b2, tight)
            if max(abs(diff.lo), abs(diff.hi)) >= eps:
                ok = False
                break
        if ok:
            return delta
        delta /= 2
    raise RuntimeError(f"could not validate a continuity delta for {spec}")


def _perturb(smp: Sampler, v: VectorQ, delta: Fraction, radius: Fraction) -> VectorQ:
    # each coordinate moves by at most delta/2, so the Euclidean move is < delta
    out = []
    for c in v:
        u = smp.rational()
        span = smp.hi - smp.lo
        step = (u - smp.lo) / span * delta - delta / 2 if span else Fraction(0)
        out.append(min(radius, max(-radius, c + step)))
    return VectorQ(out)

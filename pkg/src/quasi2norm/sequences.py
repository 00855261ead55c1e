"""Cauchy sequences of rational vectors with explicit convergence moduli.

A sequence is a pure rule ``n -> term(n)`` plus a modulus ``eps -> N`` with

    |term(n) - term(m)| <= eps      for all n, m >= N      (Euclidean length)

Euclidean control is enough for every norm of the cross family: for a
difference d and any test vector z, ``||d, z|| <= L |d × z| <= L |d| |z|``
(see :func:`norms.upper_factor`), and over the canonical basis
``sum_i |d × e_i|^2 = 2 |d|^2``, so testing against e1, e2, e3 controls d
completely.

Newton modulus
--------------
``NewtonSqrt(k, dir, x0)`` has terms ``s_n * dir`` with ``s_0 = x0`` and
``s_{n+1} = (s_n + k / s_n) / 2``.  For n >= 1 the AM-GM inequality gives
``s_n >= sqrt(k)``, and the error recurrence
``s_{n+1} - sqrt(k) = (s_n - sqrt(k))^2 / (2 s_n)`` shows the iterates
decrease towards sqrt(k).  Since ``k / s_n <= sqrt(k) <= s_n``,

    0 <= s_n - s_m <= s_n - sqrt(k) <= U_n := s_n - k / s_n    (m >= n >= 1)

U_n is an exact rational, decreasing in n, and shrinks quadratically.  The
modulus returns the first N >= 1 with ``U_N * |dir| <= eps`` (|dir| rounded
up).  No floating point is involved.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .algebra import (
    Interval,
    RationalLike,
    VectorQ,
    as_rational,
    fmt_rational,
    is_rational_square,
)
from .errors import DimensionMismatch, DomainError, IndexBudgetExceeded, ParameterRangeError
from .norms import TwoNormSpec, continuity_delta, norm_eval, vector_bound

DEFAULT_BUDGET = 30
DEFAULT_MAX_INDEX = 1_000_000


class SeqSpec:
    """Base class; subclasses are frozen dataclasses."""

    dim: int

    def term(self, n: int) -> VectorQ:
        raise NotImplementedError

    def modulus(self, eps: Fraction) -> int:
        raise NotImplementedError

    def constant_value(self) -> Optional[VectorQ]:
        """The common value if every term is identical (decided structurally)."""
        return None

    def to_json(self) -> dict[str, Any]:
        raise NotImplementedError

    def bound(self) -> Fraction:
        """Rational B with |term(n)| <= B for every n >= modulus(1)."""
        return vector_bound(self.term(self.modulus(Fraction(1)))) + 1

    def approx(self, delta: Fraction) -> tuple[VectorQ, int]:
        """A vector within Euclidean distance delta of the limit, and the
        largest index evaluated to get it."""
        n = self.modulus(delta)
        return self.term(n), n


def _check_eps(eps: RationalLike) -> Fraction:
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    return eps


@dataclass(frozen=True)
class Const(SeqSpec):
    x: VectorQ

    @property
    def dim(self) -> int:
        return self.x.dim

    def term(self, n: int) -> VectorQ:
        return self.x

    def modulus(self, eps) -> int:
        _check_eps(eps)
        return 0

    def constant_value(self) -> VectorQ:
        return self.x

    def approx(self, delta):
        return self.x, 0

    def to_json(self):
        return {"kind": "const", "x": self.x.to_json()}


@dataclass(frozen=True)
class Geometric(SeqSpec):
    """``x + r^n d`` with ``0 < |r| < 1``."""

    x: VectorQ
    d: VectorQ
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        if not 0 < abs(self.r) < 1:
            raise ParameterRangeError(f"geometric ratio needs 0 < |r| < 1, got {self.r}")
        if self.x.dim != self.d.dim:
            raise DimensionMismatch("x and d must share a dimension")

    @property
    def dim(self) -> int:
        return self.x.dim

    def term(self, n: int) -> VectorQ:
        return self.x + self.d.scale(self.r ** n)

    def modulus(self, eps) -> int:
        eps = _check_eps(eps)
        if self.d.is_zero():
            return 0
        r = abs(self.r)
        c = vector_bound(self.d) * 2 / (1 - r)
        n, tail = 0, c
        while tail > eps:
            n += 1
            tail *= r
        return n

    def constant_value(self):
        return self.x if self.d.is_zero() else None

    def to_json(self):
        return {"kind": "geometric", "x": self.x.to_json(), "d": self.d.to_json(),
                "r": fmt_rational(self.r)}


class _NewtonOrbit:
    """Thread-safe memo of exact Newton iterates for one (k, x0)."""

    _registry: dict[tuple[Fraction, Fraction], "_NewtonOrbit"] = {}
    _registry_lock = threading.Lock()

    def __init__(self, k: Fraction, x0: Fraction):
        self.k = k
        self.iterates = [x0]
        self.lock = threading.Lock()

    @classmethod
    def get(cls, k: Fraction, x0: Fraction) -> "_NewtonOrbit":
        with cls._registry_lock:
            orbit = cls._registry.get((k, x0))
            if orbit is None:
                orbit = cls._registry[(k, x0)] = cls(k, x0)
            return orbit

    def __getitem__(self, n: int) -> Fraction:
        with self.lock:
            its = self.iterates
            while len(its) <= n:
                s = its[-1]
                its.append((s + self.k / s) / 2)
            return its[n]


@dataclass(frozen=True)
class NewtonSqrt(SeqSpec):
    """Newton iterates for sqrt(k), times a direction vector."""

    k: Fraction
    dir: VectorQ
    x0: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "k", as_rational(self.k))
        object.__setattr__(self, "x0", as_rational(self.x0))
        if self.k <= 0 or is_rational_square(self.k):
            raise ParameterRangeError(f"k must be a positive non-square rational, got {self.k}")
        if self.x0 <= 0:
            raise ParameterRangeError(f"x0 must be positive, got {self.x0}")

    @property
    def dim(self) -> int:
        return self.dir.dim

    def scalar(self, n: int) -> Fraction:
        return _NewtonOrbit.get(self.k, self.x0)[n]

    def error_bound(self, n: int) -> Fraction:
        """U_n = s_n - k/s_n >= s_n - sqrt(k), valid for n >= 1."""
        s = self.scalar(n)
        return s - self.k / s

    def term(self, n: int) -> VectorQ:
        return self.dir.scale(self.scalar(n))

    def modulus(self, eps) -> int:
        eps = _check_eps(eps)
        if self.dir.is_zero():
            return 0
        size = vector_bound(self.dir)
        n = 1
        while self.error_bound(n) * size > eps:
            n += 1
        return n

    def constant_value(self):
        return self.dir if self.dir.is_zero() else None

    def to_json(self):
        return {"kind": "newton_sqrt", "k": fmt_rational(self.k), "dir": self.dir.to_json(),
                "x0": fmt_rational(self.x0)}


@dataclass(frozen=True)
class _Binary(SeqSpec):
    s: SeqSpec
    t: SeqSpec
    K: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "K", as_rational(self.K))
        if self.K < 1:
            raise ParameterRangeError("quasi constant K must be >= 1")
        if self.s.dim != self.t.dim:
            raise DimensionMismatch(f"dimension {self.s.dim} vs {self.t.dim}")

    @property
    def dim(self) -> int:
        return self.s.dim

    def modulus(self, eps) -> int:
        # ||(x_n -+ y_n) - (x_m -+ y_m), z|| <= K (||x_n - x_m, z|| + ||y_n - y_m, z||)
        eps = _check_eps(eps)
        part = eps / (2 * self.K)
        return max(self.s.modulus(part), self.t.modulus(part))

    def _parts(self, delta):
        # the operand moduli are Euclidean, so each half of delta is independent of K
        (a, na), (b, nb) = self.s.approx(delta / 2), self.t.approx(delta / 2)
        return a, b, max(na, nb)

    def _json(self, kind):
        return {"kind": kind, "s": self.s.to_json(), "t": self.t.to_json(), "K": fmt_rational(self.K)}


@dataclass(frozen=True)
class Sum(_Binary):
    def term(self, n):
        return self.s.term(n) + self.t.term(n)

    def constant_value(self):
        a, b = self.s.constant_value(), self.t.constant_value()
        return None if a is None or b is None else a + b

    def approx(self, delta):
        a, b, n = self._parts(delta)
        return a + b, n

    def to_json(self):
        return self._json("sum")


@dataclass(frozen=True)
class Diff(_Binary):
    def term(self, n):
        return self.s.term(n) - self.t.term(n)

    def constant_value(self):
        if self.s == self.t:
            return VectorQ.zero(self.dim)
        a, b = self.s.constant_value(), self.t.constant_value()
        return None if a is None or b is None else a - b

    def approx(self, delta):
        if self.s == self.t:
            return VectorQ.zero(self.dim), 0
        a, b, n = self._parts(delta)
        return a - b, n

    def to_json(self):
        return self._json("diff")


@dataclass(frozen=True)
class Scale(SeqSpec):
    alpha: Fraction
    s: SeqSpec

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))

    @property
    def dim(self) -> int:
        return self.s.dim

    def term(self, n):
        return self.s.term(n).scale(self.alpha)

    def modulus(self, eps) -> int:
        eps = _check_eps(eps)
        if self.alpha == 0:
            return 0
        return self.s.modulus(eps / abs(self.alpha))

    def constant_value(self):
        if self.alpha == 0:
            return VectorQ.zero(self.dim)
        a = self.s.constant_value()
        return None if a is None else a.scale(self.alpha)

    def approx(self, delta):
        if self.alpha == 0:
            return VectorQ.zero(self.dim), 0
        a, n = self.s.approx(delta / abs(self.alpha))
        return a.scale(self.alpha), n

    def to_json(self):
        return {"kind": "scale", "alpha": fmt_rational(self.alpha), "s": self.s.to_json()}


def seq_from_json(data: dict[str, Any]) -> SeqSpec:
    if not isinstance(data, dict):
        raise ValueError("sequence descriptor must be a JSON object")
    kind = data.get("kind")
    vec = VectorQ.from_json
    try:
        if kind == "const":
            return Const(vec(data["x"]))
        if kind == "geometric":
            return Geometric(vec(data["x"]), vec(data["d"]), as_rational(data["r"]))
        if kind == "newton_sqrt":
            return NewtonSqrt(as_rational(data["k"]), vec(data["dir"]), as_rational(data.get("x0", 1)))
        if kind in ("sum", "diff"):
            cls = Sum if kind == "sum" else Diff
            return cls(seq_from_json(data["s"]), seq_from_json(data["t"]), as_rational(data.get("K", 1)))
        if kind == "scale":
            return Scale(as_rational(data["alpha"]), seq_from_json(data["s"]))
    except KeyError as exc:
        raise ValueError(f"{kind} descriptor is missing {exc.args[0]!r}") from exc
    raise ValueError(f"unknown sequence kind {kind!r}")


def seq_at(s: SeqSpec, n: int) -> VectorQ:
    if n < 0:
        raise DomainError("index must be non-negative")
    return s.term(n)


def modulus(s: SeqSpec, eps: RationalLike) -> int:
    return s.modulus(_check_eps(eps))


def combine_seqs(op: str, s: SeqSpec, t: Optional[SeqSpec] = None, *,
                 alpha: Optional[RationalLike] = None, K: RationalLike = 1) -> SeqSpec:
    """Term-wise ``sum``, ``diff`` or ``scale``; K is the ambient quasi constant."""
    if op in ("sum", "diff"):
        if t is None:
            raise ValueError(f"{op} needs two sequences")
        return (Sum if op == "sum" else Diff)(s, t, as_rational(K))
    if op == "scale":
        if alpha is None:
            raise ValueError("scale needs alpha")
        return Scale(as_rational(alpha), s)
    raise ValueError(f"unknown operation {op!r}")


def compose_moduli(nu1: Callable[[Fraction], int], nu2: Callable[[Fraction], int],
                   K: RationalLike) -> Callable[[Fraction], int]:
    """Modulus for s ~ u obtained from s ~ t and t ~ u (quasi triangle with K)."""
    K = as_rational(K)

    def nu(eps: Fraction) -> int:
        part = as_rational(eps) / (2 * K)
        return max(nu1(part), nu2(part))

    return nu


# -- limits -------------------------------------------------------------------

def tail_index(spec: TwoNormSpec, s: SeqSpec, t: SeqSpec, variation: Fraction) -> int:
    """N with ``| ||s_m, t_m|| - lim_n ||s_n, t_n|| | <= variation`` for m >= N."""
    radius = max(s.bound(), t.bound())
    delta = continuity_delta(spec, radius, variation)
    one = Fraction(1)
    return max(s.modulus(delta), t.modulus(delta), s.modulus(one), t.modulus(one))


def limit_norm_at(spec: TwoNormSpec, s: SeqSpec, t: SeqSpec, eps: RationalLike,
                  max_index: Optional[int] = None) -> tuple[Interval, int]:
    """:func:`limit_norm` plus the largest sequence index that was evaluated."""
    eps = _check_eps(eps)
    if s.dim != spec.dim or t.dim != spec.dim:
        raise DimensionMismatch(f"{spec} needs dimension {spec.dim}")
    cs, ct = s.constant_value(), t.constant_value()
    if cs is not None and ct is not None:
        return norm_eval(spec, cs, ct, eps), 0
    # limits lie within 1 of approx(1); approximants within delta <= 1 of the limits
    radius = max(vector_bound(s.approx(Fraction(1))[0]), vector_bound(t.approx(Fraction(1))[0])) + 2
    delta = min(continuity_delta(spec, radius, eps / 4), Fraction(1))
    (x, nx), (y, ny) = s.approx(delta), t.approx(delta)
    n = max(nx, ny)
    if max_index is not None and n > max_index:
        raise IndexBudgetExceeded(f"limit needs index {n} > cap {max_index}")
    inner = norm_eval(spec, x, y, eps / 2)
    return inner.widen(eps / 4, floor=Fraction(0)), n


def limit_norm(spec: TwoNormSpec, s: SeqSpec, t: SeqSpec, eps: RationalLike,
               max_index: Optional[int] = None) -> Interval:
    """Enclosure of ``lim_n ||s_n, t_n||`` of width at most eps.

    Each sequence supplies an approximant within a Euclidean delta of its
    limit (:meth:`SeqSpec.approx`), with delta from uniform continuity so the
    approximant pair is within eps/4 of the limit value; that pair is
    enclosed to eps/2 and the result is widened by eps/4.
    Two constant sequences short-cut to a plain :func:`norm_eval`.
    """
    return limit_norm_at(spec, s, t, eps, max_index)[0]


# -- equivalence --------------------------------------------------------------

@dataclass(frozen=True)
class EquivVerdict:
    status: str  # "equivalent", "distinct" or "unknown"
    modulus: Optional[Callable[[Fraction], int]] = None
    witness: Optional[dict[str, Any]] = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"

    @property
    def distinct(self) -> bool:
        return self.status == "distinct"

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status}
        if self.modulus is not None:
            out["modulus"] = {fmt_rational(Fraction(1, 1 << k)): self.modulus(Fraction(1, 1 << k))
                              for k in (5, 10, 20)}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def are_equivalent(spec: TwoNormSpec, s: SeqSpec, t: SeqSpec, budget: int = DEFAULT_BUDGET,
                   *, max_index: int = DEFAULT_MAX_INDEX) -> EquivVerdict:
    """Three-valued test of ``lim_n ||s_n - t_n, e_i|| = 0`` for every basis e_i.

    At each level tol = 2^-j (j = 1..budget) the limit is enclosed to width
    tol/2.  An enclosure with positive lower end is a certified separation;
    otherwise its upper end is at most tol.  Surviving every level gives an
    ``equivalent`` verdict whose modulus ``nu`` satisfies
    ``|s_n - t_n| <= eps`` for n >= nu(eps).  Needing an index past
    ``max_index`` gives ``unknown``.
    """
    if s.dim != t.dim or s.dim != spec.dim:
        raise DimensionMismatch("sequences and space must share a dimension")
    d = Diff(s, t, spec.certified_K)
    bases = [VectorQ.basis(i, spec.dim) for i in range(spec.dim)]
    for j in range(1, budget + 1):
        tol = Fraction(1, 1 << j)
        for i, e in enumerate(bases):
            z = Const(e)
            try:
                enc, n = limit_norm_at(spec, d, z, tol / 2, max_index)
            except IndexBudgetExceeded as exc:
                return EquivVerdict("unknown", diagnostics={
                    "level": j, "basis": i, "reason": str(exc), "max_index": max_index})
            if enc.lo > 0:
                return EquivVerdict("distinct", witness=_separation(spec, d, z, i, enc))
            assert enc.hi <= tol
    return EquivVerdict("equivalent", modulus=d.modulus,
                        diagnostics={"tolerance": fmt_rational(Fraction(1, 1 << budget))})


def _separation(spec: TwoNormSpec, d: SeqSpec, z: Const, i: int, enc: Interval) -> dict[str, Any]:
    if d.constant_value() is not None:
        sep, index = enc.lo, 0
    else:
        # for m >= index: ||d_m, e_i|| >= lim - enc.lo/2 >= enc.lo/2
        sep = enc.lo / 2
        index = tail_index(spec, d, z, sep)
    return {"index": index, "z": z.x.to_json(), "basis": i, "separation": fmt_rational(sep),
            "enclosure": enc.to_json()}


def check_separation(spec: TwoNormSpec, s: SeqSpec, t: SeqSpec, witness: dict[str, Any],
                     samples: int = 4) -> bool:
    """Re-check a distinctness witness at a few indices past the witness index."""
    d = Diff(s, t, spec.certified_K)
    z = VectorQ.from_json(witness["z"])
    sep = as_rational(witness["separation"])
    start = witness["index"]
    for m in range(start, start + samples):
        enc = norm_eval(spec, d.term(m), z, sep / 1024)
        if enc.lo < sep:
            return False
    return True


__all__ = [
    "SeqSpec", "Const", "Geometric", "NewtonSqrt", "Sum", "Diff", "Scale",
    "seq_from_json", "seq_at", "modulus", "combine_seqs", "compose_moduli",
    "limit_norm", "limit_norm_at", "tail_index", "EquivVerdict", "are_equivalent",
    "check_separation",
]

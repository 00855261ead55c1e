"""Concrete (quasi) 2-norms on Q^3 and their certified quasi constants.

Every norm here is built on the cross product: the value of ``||x, y||`` is
some homogeneous function of ``c = x × y``.

=========  ===========================================  ==============
kind       value                                        certified K
=========  ===========================================  ==============
cross3     |c| (Euclidean)                              1
cross3p    (sum |c_i|^p)^(1/p), p = 1/n, n >= 2         2^(n-1)
scaled     c * base                                     max(1, K_base)
affine     a * base + b * base  (= (a+b) * base)        (a+b) * K_base
mutant     deliberately broken evaluators for testing   see _MUTANTS
=========  ===========================================  ==============

``cross3p`` is not a 2-norm: the l_p quasi-norm of the cross product only
satisfies the triangle inequality up to the factor 2^(1/p - 1).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from .algebra import (
    Interval,
    RationalLike,
    VectorQ,
    as_rational,
    cross3,
    fmt_rational,
    interval_root,
    interval_sqrt,
    norm_sq_cross,
    sqrt_upper,
)
from .errors import DimensionMismatch, DomainError, ParameterRangeError

KINDS = ("cross3", "cross3p", "scaled", "affine", "mutant")

# tag -> (certified K, description).  None of these is a conforming 2-norm.
_MUTANTS = {
    # |x × y| * sqrt(1 + x1^2/|x|^2): breaks symmetry only.
    "asymmetric": (Fraction(2), "weights the area by the direction of the first argument"),
    # sqrt|x × y|: breaks homogeneity only.
    "inhomogeneous": (Fraction(1), "square root of the area"),
    # |(x × y)_1|: vanishes on independent pairs such as (e1, e2).
    "degenerate": (Fraction(1), "first cross-product component only"),
}


@dataclass(frozen=True)
class TwoNormSpec:
    kind: str
    certified_K: Fraction
    dim: int = 3
    p: Optional[Fraction] = None
    c: Optional[Fraction] = None
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None
    base: Optional["TwoNormSpec"] = None
    tag: Optional[str] = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def cross3(cls) -> "TwoNormSpec":
        return cls(kind="cross3", certified_K=Fraction(1))

    @classmethod
    def cross3p(cls, p: RationalLike) -> "TwoNormSpec":
        p = as_rational(p)
        if not (0 < p < 1) or p.numerator != 1:
            raise ParameterRangeError(
                f"cross3p needs p = 1/n with integer n >= 2 (so that 2^(1/p-1) is rational), got {p}"
            )
        n = p.denominator
        return cls(kind="cross3p", p=p, certified_K=Fraction(2 ** (n - 1)))

    @classmethod
    def scaled(cls, c: RationalLike, base: Optional["TwoNormSpec"] = None) -> "TwoNormSpec":
        c = as_rational(c)
        base = base or cls.cross3()
        if c <= 0:
            raise ParameterRangeError(f"scaled norm needs c > 0, got {c}")
        return cls(kind="scaled", c=c, base=base, dim=base.dim,
                   certified_K=max(Fraction(1), base.certified_K))

    @classmethod
    def affine(cls, a: RationalLike, b: RationalLike,
               base: Optional["TwoNormSpec"] = None) -> "TwoNormSpec":
        a, b = as_rational(a), as_rational(b)
        base = base or cls.cross3()
        half = Fraction(1, 2)
        if a < half or b < half:
            raise ParameterRangeError(
                f"affine combination a*||.,.|| + b*||.,.|| requires a >= 1/2 and b >= 1/2, got a={a}, b={b}"
            )
        return cls(kind="affine", a=a, b=b, base=base, dim=base.dim,
                   certified_K=(a + b) * base.certified_K)

    @classmethod
    def mutant(cls, tag: str) -> "TwoNormSpec":
        if tag not in _MUTANTS:
            raise ParameterRangeError(f"unknown mutant tag {tag!r}; known: {sorted(_MUTANTS)}")
        return cls(kind="mutant", tag=tag, certified_K=_MUTANTS[tag][0])

    # -- descriptors ------------------------------------------------------
    @property
    def conforming(self) -> bool:
        """False for mutants anywhere in the descriptor tree."""
        if self.kind == "mutant":
            return False
        return self.base is None or self.base.conforming

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "dim": self.dim}
        for name in ("p", "c", "a", "b"):
            val = getattr(self, name)
            if val is not None:
                out[name] = fmt_rational(val)
        if self.base is not None:
            out["base"] = self.base.to_json()
        if self.tag is not None:
            out["tag"] = self.tag
        out["certified_K"] = fmt_rational(self.certified_K)
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "TwoNormSpec":
        return make_space(data)

    def digest(self) -> str:
        canon = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()

    def __str__(self) -> str:
        if self.kind == "cross3":
            return "Cross3"
        if self.kind == "cross3p":
            return f"Cross3P({self.p})"
        if self.kind == "scaled":
            return f"Scaled({self.c}, {self.base})"
        if self.kind == "affine":
            return f"Affine({self.a}, {self.b}, {self.base})"
        return f"Mutant({self.tag})"


def make_space(descriptor: dict[str, Any]) -> TwoNormSpec:
    """Build a validated :class:`TwoNormSpec` from its JSON descriptor.

    A ``certified_K`` key in the input is ignored; the certificate is always
    recomputed from the construction.
    """
    if not isinstance(descriptor, dict):
        raise ValueError("norm descriptor must be a JSON object")
    kind = descriptor.get("kind")
    if kind not in KINDS:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {KINDS}")
    dim = descriptor.get("dim", 3)
    if dim != 3:
        raise DimensionMismatch(f"only dimension 3 is supported by the cross-product family, got {dim}")

    def base() -> TwoNormSpec:
        raw = descriptor.get("base", {"kind": "cross3"})
        return make_space(raw)

    def need(name: str) -> Fraction:
        if name not in descriptor:
            raise ValueError(f"{kind} descriptor is missing {name!r}")
        return as_rational(descriptor[name])

    if kind == "cross3":
        return TwoNormSpec.cross3()
    if kind == "cross3p":
        return TwoNormSpec.cross3p(need("p"))
    if kind == "scaled":
        return TwoNormSpec.scaled(need("c"), base())
    if kind == "affine":
        return TwoNormSpec.affine(need("a"), need("b"), base())
    tag = descriptor.get("tag")
    if not isinstance(tag, str):
        raise ValueError("mutant descriptor needs a string 'tag'")
    return TwoNormSpec.mutant(tag)


def certified_K(spec: TwoNormSpec) -> Fraction:
    """Stored upper bound on the minimal quasi constant (not claimed minimal)."""
    return spec.certified_K


def _check_args(spec: TwoNormSpec, x: VectorQ, y: VectorQ) -> None:
    if x.dim != spec.dim or y.dim != spec.dim:
        raise DimensionMismatch(f"{spec} lives in dimension {spec.dim}, got {x.dim} and {y.dim}")


def exact_square(spec: TwoNormSpec, x: VectorQ, y: VectorQ) -> Optional[Fraction]:
    """``||x, y||**2`` as an exact rational when the kind allows it, else None."""
    _check_args(spec, x, y)
    if spec.kind == "cross3":
        return norm_sq_cross(x, y)
    if spec.kind == "scaled":
        inner = exact_square(spec.base, x, y)
        return None if inner is None else spec.c ** 2 * inner
    if spec.kind == "affine":
        inner = exact_square(spec.base, x, y)
        return None if inner is None else (spec.a + spec.b) ** 2 * inner
    if spec.kind == "mutant":
        if spec.tag == "asymmetric":
            nx = x.norm_sq()
            if nx == 0:
                return Fraction(0)
            return norm_sq_cross(x, y) * (1 + x[0] ** 2 / nx)
        if spec.tag == "degenerate":
            return cross3(x, y)[0] ** 2
    return None


def _cross3p_eval(p: Fraction, x: VectorQ, y: VectorQ, eps: Fraction) -> Interval:
    n = p.denominator
    mags = [abs(ci) for ci in cross3(x, y)]
    if all(m == 0 for m in mags):
        return Interval.point(0)
    coarse = sum(interval_root(m, n, 1).hi for m in mags)
    w = eps / (3 * n * (coarse + 1) ** (n - 1))
    while True:
        parts = [interval_root(m, n, w) for m in mags]
        s_lo = sum(iv.lo for iv in parts)
        s_hi = sum(iv.hi for iv in parts)
        out = Interval(s_lo ** n, s_hi ** n)
        if out.width <= eps:
            return out
        w /= 2


def norm_eval(spec: TwoNormSpec, x: VectorQ, y: VectorQ, eps: RationalLike) -> Interval:
    """Enclosure of ``||x, y||`` of width at most ``eps``."""
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    _check_args(spec, x, y)
    kind = spec.kind
    if kind == "cross3":
        return interval_sqrt(norm_sq_cross(x, y), eps)
    if kind == "scaled":
        return norm_eval(spec.base, x, y, eps / spec.c).scale(spec.c)
    if kind == "affine":
        k = spec.a + spec.b
        return norm_eval(spec.base, x, y, eps / k).scale(k)
    if kind == "cross3p":
        return _cross3p_eval(spec.p, x, y, eps)
    if spec.tag == "inhomogeneous":
        return interval_root(norm_sq_cross(x, y), 4, eps)
    if spec.tag == "degenerate":
        return Interval.point(abs(cross3(x, y)[0]))
    return interval_sqrt(exact_square(spec, x, y), eps)


def core_spec(spec: TwoNormSpec) -> TwoNormSpec:
    """Strip positive rescalings (scaled / affine), which leave every ratio
    ``||x+y,z|| / (||x,z|| + ||y,z||)`` unchanged."""
    while spec.kind in ("scaled", "affine"):
        spec = spec.base
    return spec


def upper_factor(spec: TwoNormSpec) -> Fraction:
    """Rational L with ``||d, z|| <= L * |d × z|`` for all d, z.

    For cross3p(1/n): ||u||_p <= 3^(n-1) ||u||_1 <= 3^(n-1) sqrt(3) |u|,
    and sqrt(3) is rounded up to 2.
    """
    kind = spec.kind
    if kind == "cross3":
        return Fraction(1)
    if kind == "cross3p":
        return Fraction(2 * 3 ** (spec.p.denominator - 1))
    if kind == "scaled":
        return spec.c * upper_factor(spec.base)
    if kind == "affine":
        return (spec.a + spec.b) * upper_factor(spec.base)
    if spec.tag == "asymmetric":
        return Fraction(2)
    if spec.tag == "degenerate":
        return Fraction(1)
    raise DomainError(f"{spec} is not positively homogeneous; no linear bound exists")


def lower_factor(spec: TwoNormSpec) -> Fraction:
    """Rational l > 0 with ``||d, z|| >= l * |d × z|`` (conforming kinds only)."""
    kind = spec.kind
    if kind in ("cross3", "cross3p"):
        # ||u||_p >= ||u||_1 >= |u| for p <= 1
        return Fraction(1)
    if kind == "scaled":
        return spec.c * lower_factor(spec.base)
    if kind == "affine":
        return (spec.a + spec.b) * lower_factor(spec.base)
    raise DomainError(f"{spec} has no positive lower bound against the Euclidean area")


def continuity_delta(spec: TwoNormSpec, radius: RationalLike, eps: RationalLike) -> Fraction:
    """Analytic delta for uniform continuity on a bounded region.

    If every vector involved has Euclidean length at most ``2 * radius``
    (true when components lie in [-radius, radius], since sqrt(3) < 2, and
    also when ``radius`` is itself a Euclidean bound), then
    ``|a - a'|, |b - b'| <= delta`` implies ``| ||a,b|| - ||a',b'|| | < eps``.

    The cross family rests on
    ``|a×b - a'×b'| <= |a-a'| |b| + |a'| |b-b'| <= 4 radius delta``.
    For cross3p(1/n) the map u -> ||u||_p is only Hoelder continuous:
    ``| ||u||_p - ||v||_p | <= n 3^n max(1, M) |u-v|^(1/n)`` with M an upper
    bound on |u|, obtained from p-subadditivity of t -> t^p and the mean
    value bound for s -> s^n.
    """
    radius = as_rational(radius)
    eps = as_rational(eps)
    if radius <= 0 or eps <= 0:
        raise DomainError("radius and eps must be positive")
    kind = spec.kind
    if kind == "cross3":
        return eps / (4 * radius)
    if kind == "scaled":
        return continuity_delta(spec.base, radius, eps / spec.c)
    if kind == "affine":
        return continuity_delta(spec.base, radius, eps / (spec.a + spec.b))
    if kind == "cross3p":
        n = spec.p.denominator
        const = n * 3 ** n * max(Fraction(1), 4 * radius ** 2)
        return (eps / const) ** n / (8 * radius)
    if spec.tag == "degenerate":
        return eps / (4 * radius)
    if spec.tag == "inhomogeneous":
        return eps ** 2 / (8 * radius)
    raise DomainError(f"{spec} is discontinuous at the origin; no uniform delta exists")


def vector_bound(v: VectorQ) -> Fraction:
    """Rational upper bound on the Euclidean length of v."""
    return sqrt_upper(v.norm_sq())

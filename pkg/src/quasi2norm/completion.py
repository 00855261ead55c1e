"""The completion of a quasi 2-normed space: classes of Cauchy sequences.

A :class:`CompletionElem` stores one representative sequence; equality of
classes is the certified predicate :func:`class_equal`, never structural
equality.  The norm on the completion is ``lim_n ||x_n, y_n||`` evaluated by
:func:`sequences.limit_norm`.  It is a pseudo quasi 2-norm: a scaled pair of
classes gives 0, but a zero value is not claimed to imply dependence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

from .algebra import Interval, RationalLike, VectorQ, as_rational, fmt_rational
from .errors import DimensionMismatch, DomainError, InvalidCertificate
from .norms import TwoNormSpec, lower_factor, make_space, upper_factor
from .sequences import (
    DEFAULT_BUDGET,
    Const,
    EquivVerdict,
    SeqSpec,
    Scale,
    Sum,
    are_equivalent,
    limit_norm,
    seq_from_json,
)


@dataclass(frozen=True)
class CompletionElem:
    space: TwoNormSpec
    rep: SeqSpec

    def __post_init__(self):
        if self.rep.dim != self.space.dim:
            raise DimensionMismatch(f"representative has dimension {self.rep.dim}, space {self.space.dim}")

    def to_json(self) -> dict[str, Any]:
        return {"space": self.space.to_json(), "rep": self.rep.to_json()}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "CompletionElem":
        if not isinstance(data, dict) or "space" not in data or "rep" not in data:
            raise ValueError("completion element must be an object with 'space' and 'rep'")
        space, rep = make_space(data["space"]), seq_from_json(data["rep"])
        return X0Elem(space, rep) if isinstance(rep, Const) else CompletionElem(space, rep)


@dataclass(frozen=True)
class X0Elem(CompletionElem):
    """Class of a constant sequence; the copy of the base space inside X̂."""

    def __post_init__(self):
        super().__post_init__()
        if not isinstance(self.rep, Const):
            raise TypeError("X0Elem needs a constant representative")

    @property
    def vector(self) -> VectorQ:
        return self.rep.x


def _same_space(a: CompletionElem, b: CompletionElem) -> None:
    if a.space != b.space:
        raise DomainError(f"elements live in different spaces: {a.space} vs {b.space}")


def embed(space: TwoNormSpec, x: VectorQ) -> X0Elem:
    return X0Elem(space, Const(x))


def class_equal(a: CompletionElem, b: CompletionElem, budget: int = DEFAULT_BUDGET, **kw) -> EquivVerdict:
    _same_space(a, b)
    return are_equivalent(a.space, a.rep, b.rep, budget, **kw)


def chat_combine(op: str, a: CompletionElem, b: Optional[CompletionElem] = None, *,
                 alpha: Optional[RationalLike] = None) -> CompletionElem:
    """``add`` two classes or ``scale`` one, via term-wise representatives."""
    if op == "add":
        if b is None:
            raise ValueError("add needs two elements")
        _same_space(a, b)
        return CompletionElem(a.space, Sum(a.rep, b.rep, a.space.certified_K))
    if op == "scale":
        if alpha is None:
            raise ValueError("scale needs alpha")
        return CompletionElem(a.space, Scale(as_rational(alpha), a.rep))
    raise ValueError(f"unknown operation {op!r}")


def chat_sub(a: CompletionElem, b: CompletionElem) -> CompletionElem:
    return chat_combine("add", a, chat_combine("scale", b, alpha=-1))


def chat_norm(a: CompletionElem, b: CompletionElem, eps: RationalLike) -> Interval:
    _same_space(a, b)
    return limit_norm(a.space, a.rep, b.rep, eps)


def basis_classes(space: TwoNormSpec) -> list[X0Elem]:
    return [embed(space, VectorQ.basis(i, space.dim)) for i in range(space.dim)]


def approximate_by_X0(a: CompletionElem, eps: RationalLike) -> VectorQ:
    """A rational vector x whose embedded class is within eps of a.

    ``x = rep(N)`` with N from the representative's modulus at eps / (4 L),
    L = :func:`norms.upper_factor`.  Then ``||a - x, e_i|| <= eps / 4`` for each
    basis vector, so an eps/2 enclosure of it stays below eps.
    """
    eps = as_rational(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    n = a.rep.modulus(eps / (4 * upper_factor(a.space)))
    return a.rep.term(n)


@dataclass(frozen=True)
class Diagonal(SeqSpec):
    """``c_n = approximate_by_X0(elems(n), 1/(n+1))``, the diagonal of a Cauchy
    family in the completion.

    With ``||a_n - c_n, b|| < 1/(n+1)`` and the quasi triangle applied twice,

        ||c_n - c_m, b|| < K/(n+1) + K^2 ||a_n - a_m, b|| + K^2/(m+1)

    so ``norm_modulus(eps) = max(M(eps / (2 K^2)), ceil(2 (K + K^2) / eps))``
    bounds the basis norms of differences by eps.  When every element is
    already constant (``x0_family``) the approximation is exact, c_n = a_n,
    and the modulus is M itself.  The Euclidean modulus follows from
    ``|d| <= (5 / (4 l)) max_i ||d, e_i||`` (l = :func:`norms.lower_factor`,
    sqrt(3/2) <= 5/4).
    """

    space: TwoNormSpec
    elems: Callable[[int], CompletionElem]
    family_modulus: Callable[[Fraction], int]
    x0_family: bool = False

    @property
    def dim(self) -> int:
        return self.space.dim

    def element(self, n: int) -> CompletionElem:
        el = self.elems(n)
        if el.space != self.space:
            raise InvalidCertificate(f"family element {n} lives in another space")
        if self.x0_family and not isinstance(el.rep, Const):
            raise InvalidCertificate(f"family declared constant but element {n} is not")
        return el

    def term(self, n: int) -> VectorQ:
        return approximate_by_X0(self.element(n), Fraction(1, n + 1))

    def norm_modulus(self, eps: Fraction) -> int:
        if self.x0_family:
            return self.family_modulus(eps)
        K = self.space.certified_K
        return max(self.family_modulus(eps / (2 * K * K)), math.ceil(2 * (K + K * K) / eps))

    def modulus(self, eps) -> int:
        eps = as_rational(eps)
        if eps <= 0:
            raise DomainError("eps must be positive")
        return self.norm_modulus(eps * 4 * lower_factor(self.space) / 5)

    def to_json(self):
        raise TypeError("diagonal representatives wrap Python callables and are not serialisable")


def _spot_check(space: TwoNormSpec, elems, family_modulus, checks: Iterable[Fraction]) -> None:
    zs = basis_classes(space)
    for eps in checks:
        n = family_modulus(eps)
        for m in (n, n + 1, 2 * n + 1):
            diff = chat_sub(elems(n), elems(m))
            for z in zs:
                enc = chat_norm(diff, z, eps / 4)
                if enc.lo > eps:
                    raise InvalidCertificate(
                        f"family modulus fails at eps={eps}: indices {n}, {m} differ by more than eps")


def complete_limit(
    space: TwoNormSpec,
    elems: Callable[[int], CompletionElem],
    family_modulus: Callable[[Fraction], int],
    *,
    x0_family: bool = False,
    spot_checks: Iterable[RationalLike] = (Fraction(1, 2), Fraction(1, 16), Fraction(1, 256)),
) -> CompletionElem:
    """Limit of a Cauchy family ``n -> elems(n)`` in the completion.

    ``family_modulus(eps)`` must give N with ``||a_n - a_m, e_i|| <= eps`` for
    n, m >= N and every basis class; it is spot-checked at ``spot_checks``
    and an :class:`InvalidCertificate` is raised if it fails.  The result is
    the class of the diagonal sequence (see :class:`Diagonal`).
    """
    _spot_check(space, elems, family_modulus, [as_rational(e) for e in spot_checks])
    return CompletionElem(space, Diagonal(space, elems, family_modulus, x0_family))


def check_embedding_isometry(space: TwoNormSpec, pairs: Iterable[tuple[VectorQ, VectorQ]],
                             eps: RationalLike) -> list[dict[str, Any]]:
    """Compare chat_norm of embedded pairs with norm_eval; one record per pair."""
    from .norms import norm_eval

    out = []
    for x, y in pairs:
        lhs = chat_norm(embed(space, x), embed(space, y), eps)
        rhs = norm_eval(space, x, y, eps)
        out.append({"x": x.to_json(), "y": y.to_json(), "completion": lhs.to_json(),
                    "base": rhs.to_json(), "equal": lhs == rhs})
    return out


def density_check(a: CompletionElem, eps: RationalLike) -> dict[str, Any]:
    """Approximate a from X̂₀ at eps and certify the residual against each basis class."""
    eps = as_rational(eps)
    x = approximate_by_X0(a, eps)
    diff = chat_sub(a, embed(a.space, x))
    encs = [chat_norm(diff, z, eps / 2) for z in basis_classes(a.space)]
    return {"eps": fmt_rational(eps), "x": x.to_json(),
            "residuals": [e.to_json() for e in encs],
            "ok": all(e.hi < eps for e in encs)}

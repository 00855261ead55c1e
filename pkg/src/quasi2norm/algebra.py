"""Exact rational vectors and rigorous interval enclosures.

Scalars are :class:`fractions.Fraction`. Irrational quantities (square
roots, p-th roots) never leave this module as floats; they are returned as
:class:`Interval` objects with rational endpoints that provably contain the
true value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, DomainError

RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def fmt_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def pow2_at_most(eps: Fraction) -> int:
    """Smallest k >= 0 with 2**-k <= eps."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    k = 0
    while Fraction(1, 1 << k) > eps:
        k += 1
    return k


@dataclass(frozen=True)
class VectorQ:
    components: tuple[Fraction, ...]

    def __init__(self, components: Iterable[RationalLike]):
        comps = tuple(as_rational(c) for c in components)
        if not comps:
            raise DimensionMismatch("vectors must have positive dimension")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, dim: int) -> "VectorQ":
        return cls([0] * dim)

    @classmethod
    def basis(cls, i: int, dim: int = 3) -> "VectorQ":
        return cls([1 if j == i else 0 for j in range(dim)])

    @property
    def dim(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> Fraction:
        return self.components[i]

    def _check(self, other: "VectorQ") -> None:
        if not isinstance(other, VectorQ):
            raise TypeError("expected a VectorQ")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "VectorQ") -> "VectorQ":
        self._check(other)
        return VectorQ(a + b for a, b in zip(self, other))

    def __sub__(self, other: "VectorQ") -> "VectorQ":
        self._check(other)
        return VectorQ(a - b for a, b in zip(self, other))

    def __neg__(self) -> "VectorQ":
        return VectorQ(-a for a in self)

    def scale(self, alpha: RationalLike) -> "VectorQ":
        alpha = as_rational(alpha)
        return VectorQ(alpha * a for a in self)

    def __rmul__(self, alpha: RationalLike) -> "VectorQ":
        return self.scale(alpha)

    def dot(self, other: "VectorQ") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def norm_sq(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self)

    def to_json(self) -> list[str]:
        return [fmt_rational(c) for c in self]

    @classmethod
    def from_json(cls, data: Sequence[RationalLike]) -> "VectorQ":
        if isinstance(data, (str, bytes)) or not isinstance(data, Sequence):
            raise ValueError("a vector must be a JSON array")
        return cls(data)

    @classmethod
    def parse(cls, text: str) -> "VectorQ":
        """Parse a comma separated list such as ``"1,-2/3,4"``."""
        return cls(tok for tok in text.split(","))

    def __repr__(self) -> str:
        return "VectorQ(" + ", ".join(str(c) for c in self) + ")"


@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]`` enclosing a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q: RationalLike) -> "Interval":
        q = as_rational(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q: RationalLike) -> bool:
        q = as_rational(q)
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def scale(self, c: RationalLike) -> "Interval":
        c = as_rational(c)
        if c >= 0:
            return Interval(c * self.lo, c * self.hi)
        return Interval(c * self.hi, c * self.lo)

    def __rmul__(self, c: RationalLike) -> "Interval":
        return self.scale(c)

    def widen(self, r: Fraction, floor: Fraction | None = None) -> "Interval":
        lo = self.lo - r
        if floor is not None and lo < floor:
            lo = floor
        return Interval(lo, self.hi + r)

    def to_json(self) -> dict[str, str]:
        return {"lo": fmt_rational(self.lo), "hi": fmt_rational(self.hi)}

    @classmethod
    def from_json(cls, data: dict) -> "Interval":
        return cls(as_rational(data["lo"]), as_rational(data["hi"]))


def _require_dim3(*vs: VectorQ) -> None:
    for v in vs:
        if v.dim != 3:
            raise DimensionMismatch(f"cross product needs dimension 3, got {v.dim}")


def cross3(x: VectorQ, y: VectorQ) -> VectorQ:
    _require_dim3(x, y)
    x1, x2, x3 = x
    y1, y2, y3 = y
    return VectorQ((x2 * y3 - x3 * y2, x3 * y1 - x1 * y3, x1 * y2 - x2 * y1))


def norm_sq_cross(x: VectorQ, y: VectorQ) -> Fraction:
    """Exact squared area ``|x × y|**2`` of the parallelogram on x, y."""
    return cross3(x, y).norm_sq()


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer n."""
    if n < 0:
        raise DomainError("iroot of a negative integer")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton from above; converges monotonically to the floor.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _root_at_scale(q: Fraction, k: int, bits: int) -> Interval:
    scaled = q * (1 << (bits * k))
    m = iroot(scaled.numerator // scaled.denominator, k)
    lo = Fraction(m, 1 << bits)
    if scaled.denominator == 1 and m ** k == scaled.numerator:
        return Interval(lo, lo)
    return Interval(lo, Fraction(m + 1, 1 << bits))


def interval_root(q: RationalLike, k: int, eps: RationalLike) -> Interval:
    """Enclosure of the real k-th root of ``q >= 0`` with width <= eps.

    The grid is dyadic: ``lo = floor(root * 2**b) / 2**b``, so ``lo**k <= q``
    and ``hi**k >= q`` hold exactly, and perfect powers come back as points.
    """
    q = as_rational(q)
    eps = as_rational(eps)
    if q < 0:
        raise DomainError(f"root of negative rational {q}")
    if eps <= 0:
        raise DomainError("eps must be positive")
    if k < 1:
        raise DomainError("root order must be a positive integer")
    if q == 0:
        return Interval(Fraction(0), Fraction(0))
    return _root_at_scale(q, k, pow2_at_most(eps))


def interval_sqrt(q: RationalLike, eps: RationalLike) -> Interval:
    return interval_root(q, 2, eps)


def sqrt_upper(q: RationalLike) -> Fraction:
    """A rational upper bound on sqrt(q), tight to 2**-16."""
    return interval_sqrt(q, Fraction(1, 1 << 16)).hi


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d

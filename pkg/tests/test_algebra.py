from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cross_by_cofactors, lagrange_area_sq, newton_iterates
from quasi2norm import DimensionMismatch, DomainError, Interval, VectorQ, cross3, interval_sqrt, norm_sq_cross
from quasi2norm.algebra import as_rational, fmt_rational, interval_root, iroot
from strategies import nonneg, small_eps, vectors

E1, E2, E3 = (VectorQ.basis(i) for i in range(3))


def V(*xs):
    return VectorQ(xs)


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        ((1, 2, 3), (4, 5, 6), cross_by_cofactors((1, 2, 3), (4, 5, 6))),
        ((1, 2, 3), (1, 2, 3), (0, 0, 0)),
    ],
)
def test_cross3_examples(x, y, expected):
    assert cross3(V(*x), V(*y)) == V(*expected)


def test_cross3_frozen_value():
    assert cross3(V(1, 2, 3), V(4, 5, 6)) == V(-3, 6, -3)


def test_cross3_rejects_other_dimensions():
    with pytest.raises(DimensionMismatch):
        cross3(VectorQ([1, 2]), VectorQ([3, 4]))
    with pytest.raises(DimensionMismatch):
        V(1, 2, 3) + VectorQ([1, 2])


@pytest.mark.parametrize(
    "x, y, expected",
    [((1, 0, 0), (0, 1, 0), 1), ((1, 2, 3), (4, 5, 6), 54), ((2, 4, 6), (1, 2, 3), 0)],
)
def test_norm_sq_cross_examples(x, y, expected):
    assert norm_sq_cross(V(*x), V(*y)) == expected
    assert lagrange_area_sq(x, y) == expected


@given(vectors, vectors)
def test_lagrange_identity(x, y):
    assert norm_sq_cross(x, y) == lagrange_area_sq(tuple(x), tuple(y))


@given(vectors, vectors)
def test_squared_symmetry(x, y):
    assert norm_sq_cross(x, y) == norm_sq_cross(y, x)


@given(vectors, vectors, vectors)
def test_cross_bilinear(x, x2, y):
    assert cross3(x + x2, y) == cross3(x, y) + cross3(x2, y)


@given(vectors, vectors)
def test_cross_matches_cofactor_oracle(x, y):
    assert tuple(cross3(x, y)) == cross_by_cofactors(tuple(x), tuple(y))


def test_interval_sqrt_perfect_square():
    for eps in (Fraction(1), Fraction(1, 3), Fraction(1, 2 ** 30)):
        iv = interval_sqrt(4, eps)
        assert iv.contains(2) and iv.width <= eps


def test_interval_sqrt_zero():
    iv = interval_sqrt(0, Fraction(1, 100))
    assert iv.lo == 0 and iv.width <= Fraction(1, 100)


def test_interval_sqrt_two_against_newton():
    eps = Fraction(1, 2 ** 20)
    iv = interval_sqrt(2, eps)
    assert iv.width <= eps
    s = newton_iterates(2, 2, 6)[-1]
    lo, hi = 2 / s, s
    assert hi - lo < Fraction(1, 2 ** 60)
    assert iv.lo <= lo and hi <= iv.hi


def test_interval_sqrt_domain():
    with pytest.raises(DomainError):
        interval_sqrt(-1, Fraction(1, 2))
    with pytest.raises(DomainError):
        interval_sqrt(2, 0)


@given(nonneg, small_eps)
def test_interval_sqrt_encloses(q, eps):
    iv = interval_sqrt(q, eps)
    assert iv.lo >= 0
    assert iv.lo ** 2 <= q <= iv.hi ** 2
    assert iv.width <= eps


@given(nonneg, st.integers(min_value=1, max_value=5), small_eps)
def test_interval_root_encloses(q, k, eps):
    iv = interval_root(q, k, eps)
    assert iv.lo ** k <= q <= iv.hi ** k
    assert iv.width <= eps


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=1, max_value=7))
def test_iroot_is_floor(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_rational_serialisation():
    assert fmt_rational(Fraction(-6, 4)) == "-3/2"
    assert fmt_rational(Fraction(5)) == "5/1"
    assert as_rational("-3/2") == Fraction(-3, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)
    v = V(1, Fraction(-2, 3), 0)
    assert v.to_json() == ["1/1", "-2/3", "0/1"]
    assert VectorQ.from_json(v.to_json()) == v
    assert VectorQ.parse("1,-2/3,0") == v
    iv = Interval(Fraction(1, 3), Fraction(1, 2))
    assert iv.to_json() == {"lo": "1/3", "hi": "1/2"}
    assert Interval.from_json(iv.to_json()) == iv


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(ValueError):
        Interval(Fraction(1), Fraction(0))

from fractions import Fraction

from hypothesis import strategies as st

from quasi2norm import VectorQ

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=64)
nonneg = st.fractions(min_value=0, max_value=1000, max_denominator=1000)
small_eps = st.integers(min_value=0, max_value=40).map(lambda k: Fraction(1, 2 ** k))
vectors = st.tuples(rationals, rationals, rationals).map(VectorQ)

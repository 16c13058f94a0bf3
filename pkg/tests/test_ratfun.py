from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from nodalmirror.ratfun import RatFun

X = RatFun.x(1)
Y = RatFun.pole(-1, 1) - RatFun.pole(-1, 2)          # x/(1+x)^2
Z = RatFun.pole(-1, 1) - RatFun.pole(-1, 2).scale(2) + RatFun.pole(-1, 3)   # x^2/(1+x)^3


def test_cubic_relation_holds_exactly():
    assert Y * Z - Y ** 3 - Z * Z == RatFun()


def test_partial_fractions_clear_denominator():
    assert Y * RatFun.linear(-1) ** 2 == X
    assert Z * RatFun.linear(-1) ** 3 == X * X


def test_inverse_of_linear_factor():
    assert RatFun.pole(2, 1) * RatFun.linear(2) == RatFun.const(1)


def test_distinct_poles_split():
    prod = RatFun.pole(0, 1) * RatFun.pole(1, 1)
    # 1/(x(x-1)) = 1/(x-1) - 1/x
    assert prod == RatFun.pole(1, 1) - RatFun.pole(0, 1)


def test_negative_power_constructor_is_pole_at_zero():
    assert RatFun.x(-2) == RatFun.pole(0, 2)


def test_local_data():
    assert Y.degree() == -1 and X.degree() == 1
    assert Z.pole_order(-1) == 3 and Z.pole_order(0) == 0
    assert Y.value(0) == 0 and Y.taylor(0, 1) == 1
    assert Y.value(1) == F(1, 4)
    with pytest.raises(ValueError):
        Y.value(-1)


def test_expansion_at_infinity():
    # x/(1+x)^2 = 1/x - 2/x^2 + ...
    assert Y.coeff_at_infinity(-1) == 1
    assert Y.coeff_at_infinity(-2) == -2
    assert Y.coeff_at_infinity(0) == 0


def test_render():
    assert Y.render() == "(x+1)^-1 - (x+1)^-2"
    assert RatFun().render() == "0"
    assert (X * X - 3).render() == "x^2 - 3"


def test_rejects_bad_keys():
    with pytest.raises(ValueError):
        RatFun({("p", 0, 0): 1})
    with pytest.raises(ValueError):
        RatFun({("x", -1): 1})


small = st.integers(-3, 3)
term = st.one_of(
    st.tuples(st.just("x"), st.integers(0, 3)),
    st.tuples(st.just("p"), st.sampled_from([F(-1), F(2), F(1, 2)]), st.integers(1, 3)))
ratfun = st.dictionaries(term, small, max_size=4).map(RatFun)


@settings(max_examples=60, deadline=None)
@given(ratfun, ratfun, st.sampled_from([F(3), F(-2), F(5, 7)]))
def test_product_matches_pointwise_values(a, b, at):
    assert (a * b).value(at) == a.value(at) * b.value(at)


@settings(max_examples=40, deadline=None)
@given(ratfun, ratfun, ratfun)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c

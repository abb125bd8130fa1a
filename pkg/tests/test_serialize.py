import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from algrr.chern import characteristic_class, formal
from algrr.io import rational, serialize_result, to_jsonable
from strategies import series


def test_rational_examples():
    assert serialize_result(Fraction(1, 2)) == '{"num":1,"den":2}'
    assert rational((-2, -4)) == {"num": 1, "den": 2}
    assert rational((3, -6)) == {"num": -1, "den": 2}


def test_series_example():
    T = formal("T", 1)
    s = characteristic_class("todd", T, 1)
    assert serialize_result(s) == '[["1",{"num":1,"den":1}],["c1(T)",{"num":1,"den":2}]]'


def test_keys_sorted_and_compact():
    out = serialize_result({"b": 1, "a": [Fraction(2), None, True]})
    assert out == '{"a":[{"num":2,"den":1},null,true],"b":1}'


def test_floats_refused():
    with pytest.raises(TypeError):
        to_jsonable(0.5)


@given(st.fractions())
def test_rationals_are_reduced_and_injective(q):
    rec = json.loads(serialize_result(q))
    assert rec["den"] > 0
    assert Fraction(rec["num"], rec["den"]) == q
    assert serialize_result(Fraction(rec["num"] * 3, rec["den"] * 3)) == serialize_result(q)


@given(st.fractions(), st.fractions())
def test_distinct_rationals_serialize_differently(a, b):
    assert (serialize_result(a) == serialize_result(b)) == (a == b)


@given(series(), series())
def test_series_serialization_is_stable_and_injective(a, b):
    sa = serialize_result(a)
    assert sa == serialize_result(a + 0 * b)
    assert (sa == serialize_result(b)) == (a == b)
    assert all(ch < "\x80" for ch in sa)

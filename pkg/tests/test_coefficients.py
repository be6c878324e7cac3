import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redbundle.coefficients import CoefficientParseError, constant, parse_coefficient


def test_forms():
    assert parse_coefficient("const:2.5")(7.0) == 2.5
    assert parse_coefficient("poly:1,0,3")(2.0) == 13.0
    s = parse_coefficient("sin:2,3,0.5")
    assert s(1.0) == pytest.approx(2 * math.sin(3.5))
    assert parse_coefficient("const:1+sin:1,1,0")(0.3) == pytest.approx(1 + math.sin(0.3))


def test_zero_detection():
    assert parse_coefficient("const:0").is_zero
    assert parse_coefficient("poly:0,0").is_zero
    assert not constant(1e-3).is_zero


@pytest.mark.parametrize("bad", ["", "cos:1", "poly:", "sin:1,2", "const:x", "const:inf", "const:1+"])
def test_malformed(bad):
    with pytest.raises(CoefficientParseError):
        parse_coefficient(bad)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4),
       st.floats(-2, 2), st.floats(0.1, 3), st.floats(-3, 3), st.floats(-5, 5))
def test_derivative_matches_finite_differences(coefs, a, w, phase, t):
    spec = "poly:" + ",".join(repr(c) for c in coefs) + f"+sin:{a!r},{w!r},{phase!r}"
    c = parse_coefficient(spec)
    h = 1e-5
    assert c.deriv(t) == pytest.approx((c(t + h) - c(t - h)) / (2 * h), abs=1e-5)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from redbundle.geometry import (
    Chart,
    ChartError,
    DimensionError,
    EvaluationError,
    ScalarField,
    SmoothMap,
    TwoForm,
    antisymmetry_residual,
    closedness_residual,
    constant_two_form,
    differential,
    interior_product,
    jacobian,
    polynomial_field,
    pullback_two_form,
    vertical_lift,
)
from redbundle.bundle import canonical_bundle
from redbundle.families import polynomial_family, polynomial_two_form

finite = st.floats(-2, 2, allow_nan=False)


def test_differential_analytic_and_fd():
    chart = Chart("x", ("t", "p", "q", "p1"))
    f = ScalarField(chart, lambda x: x[1] + x[2] ** 2, lambda x: np.array([0, 1, 2 * x[2], 0.0]))
    x = [0.0, 1.0, 2.0, 3.0]
    assert np.allclose(differential(f, x), [0, 1, 4, 0], atol=1e-12)
    assert np.allclose(differential(f.without_gradient(), x), [0, 1, 4, 0], atol=1e-7)


def test_differential_rejects_wrong_dimension():
    chart = Chart("x", ("a", "b"))
    f = ScalarField(chart, lambda x: x[0])
    with pytest.raises(DimensionError):
        differential(f, [1.0, 2.0, 3.0])


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_differential_reports_non_finite():
    chart = Chart("x", ("a", "b"))
    f = ScalarField(chart, lambda x: 1.0 / x[0])
    with pytest.raises(EvaluationError):
        differential(f, [0.0, 1.0])


def test_closedness_of_constant_and_nonclosed_forms():
    chart = Chart("x", ("t", "p", "q", "p1"))
    W = np.zeros((4, 4))
    W[0, 1], W[1, 0] = 1, -1
    assert closedness_residual(constant_two_form(chart, W), np.ones(4)) < 1e-12

    def q_dt_dp(x):
        m = np.zeros((4, 4))
        m[0, 1], m[1, 0] = x[2], -x[2]
        return m

    res = closedness_residual(TwoForm(chart, q_dt_dp), [0.3, 1.0, 0.7, -0.2])
    assert abs(res - 1.0) < 1e-8


def test_interior_product_of_vertical_generator():
    chart = Chart("x", ("t", "p"))
    omega = constant_two_form(chart, [[0, 1], [-1, 0]])
    assert np.allclose(interior_product([0.0, 1.0], omega, [0.0, 0.0]), [-1.0, 0.0])


def test_pullback_along_section_with_zero_hamiltonian():
    b = canonical_bundle(1)
    section = SmoothMap(b.base_chart, b.total_chart, lambda v: np.insert(v, 1, 0.0),
                        lambda v: np.insert(np.eye(3), 1, 0.0, axis=0))
    pulled = pullback_two_form(section, b.omega, [0.4, 1.0, -2.0])
    expected = np.zeros((3, 3))
    expected[1, 2], expected[2, 1] = 1.0, -1.0
    assert np.array_equal(pulled, expected)


def test_jacobian_shape_is_checked():
    a, b = Chart("a", ("x", "y")), Chart("b", ("u",))
    phi = SmoothMap(a, b, lambda x: x[:1], lambda x: np.eye(2))
    with pytest.raises(DimensionError):
        jacobian(phi, [1.0, 2.0])


def test_vertical_lift_of_area_form():
    b = canonical_bundle(2)
    c = 1.7
    beta = constant_two_form(b.config_chart, [[0, 0, 0], [0, 0, c], [0, -c, 0]])
    lifted = vertical_lift(beta, np.zeros(6), b.total_chart)
    i1, i2 = b.total_chart.index("p1"), b.total_chart.index("p2")
    expected = np.zeros((6, 6))
    expected[i1, i2], expected[i2, i1] = c, -c
    assert np.array_equal(lifted, expected)


def test_vertical_lift_requires_cotangent_chart():
    plain = Chart("x", ("a", "b"))
    beta = constant_two_form(plain, np.zeros((2, 2)))
    with pytest.raises(ChartError):
        vertical_lift(beta, [0.0, 0.0], plain)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 7, elements=finite))
def test_polynomial_gradient_matches_finite_differences(x):
    b = canonical_bundle(3)
    for f in polynomial_family(b.base_chart, count=10):
        assert np.allclose(differential(f, x), differential(f.without_gradient(), x), atol=1e-5)


@settings(max_examples=50, deadline=None)
@given(arrays(float, 4, elements=finite), st.integers(0, 1000))
def test_exact_polynomial_two_forms_are_closed_and_antisymmetric(x, seed):
    b = canonical_bundle(3)
    beta = polynomial_two_form(b.config_chart, seed=seed)
    assert antisymmetry_residual(beta(x)) < 1e-12
    assert closedness_residual(beta, x) < 1e-4


def test_polynomial_field_exponents():
    chart = Chart("x", ("a", "b"))
    f = polynomial_field(chart, [(2.0, (2, 1)), (-1.0, (0, 0))])
    assert f([3.0, 2.0]) == 35.0
    assert np.allclose(differential(f, [3.0, 2.0]), [24.0, 18.0])

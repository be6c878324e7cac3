import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from redbundle.bundle import (
    MagneticTerm,
    SingularDeformationWarning,
    SingularFormError,
    base_poisson_bracket,
    canonical_bundle,
    deformed_bracket_residual,
    magnetic_deform,
    poisson_tensor,
    symplectic_bracket,
)
from redbundle.geometry import TwoForm, constant_two_form, coordinate_function
from redbundle.families import polynomial_family, polynomial_two_form

finite = st.floats(-2, 2, allow_nan=False)


def test_canonical_omega_blocks():
    b = canonical_bundle(1)
    assert b.total_chart.coordinate_names == ("t", "p", "q1", "p1")
    W = b.omega(np.zeros(4))
    assert np.array_equal(W, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_projection_drops_vertical_coordinate():
    b = canonical_bundle(1)
    assert np.array_equal(b.mu([1.0, 2.0, 3.0, 4.0]), [1.0, 3.0, 4.0])
    assert np.array_equal(b.psi(2.5, [1.0, 2.0, 3.0, 4.0]), [1.0, 4.5, 3.0, 4.0])
    assert np.array_equal(b.zeta()(np.zeros(4)), [-1.0, 0, 0, 0])


def test_canonical_brackets():
    b = canonical_bundle(2)
    c = b.total_chart
    a = np.array([0.3, -1.0, 0.5, 2.0, -0.7, 1.1])
    q1, p1, t, p = (coordinate_function(c, n) for n in ("q1", "p1", "t", "p"))
    assert symplectic_bracket(b, q1, p1, a) == pytest.approx(1.0)
    assert symplectic_bracket(b, t, p, a) == pytest.approx(1.0)
    assert symplectic_bracket(b, p1, q1, a) == pytest.approx(-1.0)
    # t commutes with everything on the base
    base = b.base_chart
    assert base_poisson_bracket(b, coordinate_function(base, "t"), coordinate_function(base, "p1"),
                                b.mu(a)) == 0.0


def test_magnetic_bracket_of_momenta():
    b = canonical_bundle(2)
    c = 0.8
    beta = constant_two_form(b.config_chart, [[0, 0, 0], [0, 0, c], [0, -c, 0]])
    deformed = magnetic_deform(b, MagneticTerm(beta, b.total_chart))
    p1, p2 = (coordinate_function(b.total_chart, n) for n in ("p1", "p2"))
    assert symplectic_bracket(deformed, p1, p2, np.zeros(6)) == pytest.approx(c)
    assert symplectic_bracket(b, p1, p2, np.zeros(6)) == 0.0


def test_singular_form_raises_with_point():
    b = canonical_bundle(1)
    zero = b.with_omega(TwoForm(b.total_chart, lambda a: np.zeros((4, 4)), "zero"))
    with pytest.raises(SingularFormError) as info:
        poisson_tensor(zero.omega, [1.0, 2.0, 3.0, 4.0])
    assert info.value.point == [1.0, 2.0, 3.0, 4.0]


def test_singular_deformation_warns():
    b = canonical_bundle(1)
    beta = constant_two_form(b.config_chart, [[0, 1], [-1, 0]])
    m = MagneticTerm(beta, b.total_chart)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        magnetic_deform(b, m, check_points=np.zeros((1, 4)))
    # a bundle whose form is exactly B degenerates to zero once B is removed
    degenerate = b.with_omega(m.B)
    with pytest.warns(SingularDeformationWarning):
        magnetic_deform(degenerate, m, check_points=np.zeros((1, 4)))


@settings(max_examples=40, deadline=None)
@given(arrays(float, 8, elements=finite), st.integers(0, 19), st.integers(0, 19))
def test_bracket_antisymmetry(a, i, j):
    b = canonical_bundle(3)
    fam = polynomial_family(b.total_chart)
    assert symplectic_bracket(b, fam[i], fam[j], a) == pytest.approx(
        -symplectic_bracket(b, fam[j], fam[i], a), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(arrays(float, 8, elements=finite), st.integers(0, 100))
def test_magnetic_formula_for_random_exact_beta(a, seed):
    b = canonical_bundle(3)
    m = MagneticTerm(polynomial_two_form(b.config_chart, seed=seed, scale=0.3), b.total_chart)
    fam = polynomial_family(b.total_chart, count=6)
    for f in fam:
        for g in fam:
            assert deformed_bracket_residual(b, m, f, g, a) < 1e-8


@settings(max_examples=40, deadline=None)
@given(arrays(float, 8, elements=finite), st.floats(-5, 5))
def test_principal_action_group_law(a, s):
    b = canonical_bundle(3)
    assert np.allclose(b.psi(s, b.psi(-s, a)), a)
    assert np.allclose(b.psi(s, b.psi(1.5, a)), b.psi(s + 1.5, a))
    assert np.array_equal(b.mu(b.psi(s, a)), b.mu(a))

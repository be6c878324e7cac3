import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redbundle.bundle import canonical_bundle
from redbundle.geometry import ScalarField, VectorField
from redbundle.hamiltonian import HamiltonianSection
from redbundle.models import build_model
from redbundle.models.heavy_top import euler_to_matrix
from redbundle.symmetry import (
    InvalidSampleError,
    ReductionMismatchError,
    SymmetryAction,
    canonical_action_report,
    cotangent_momentum,
    equivariance_check,
    momentum_generator_residual,
    reduce,
    reduced_dynamics_consistency,
    time_translation_action,
    trivial_action,
)

angles = st.floats(-math.pi, math.pi)


def test_oscillator_momentum_is_angular_momentum(oscillator, rng):
    for a in oscillator.sample_points(rng, 50):
        J = oscillator.momentum(a)[0]
        assert J == pytest.approx(a[2] * a[5] - a[3] * a[4], abs=1e-12)
        assert J == pytest.approx(oscillator.cartesian_to_polar(a)[4], abs=1e-12)


def test_polar_momentum_is_p_theta(oscillator, rng):
    b = oscillator.polar_bundle
    for y in oscillator.sample_polar(rng, 20):
        assert cotangent_momentum(oscillator.polar_action, b.total_chart, y)[0] == pytest.approx(y[4])


def test_heavy_top_momentum_at_identity(heavytop):
    # theta = 0 is a chart singularity, so use a generic attitude with A Pi = e3
    a = np.array([0.0, 0.0, 0.4, 0.3, -0.2, 0.0, 0.0, 0.0])
    A = euler_to_matrix(*a[2:5])
    Pi = A.T @ np.array([0.0, 0.0, 1.0])  # body momentum with A Pi = e3
    y = heavytop.euler_to_state(a)
    y[6:9] = Pi
    assert heavytop.momentum_of_state(y)[0] == pytest.approx(1.0, abs=1e-12)
    assert heavytop.momentum(heavytop.state_to_euler(y))[0] == pytest.approx(1.0, abs=1e-9)


def test_model_actions_are_canonical(oscillator, heavytop, rng):
    for model in (oscillator, heavytop):
        pts = model.sample_points(rng, 50)
        gs = model.sample_group(rng, 50)
        shifts = rng.uniform(-3, 3, 50)
        rep = canonical_action_report(model.action, model.bundle, pts, gs, shifts, 1e-10)
        assert rep.passed, rep.residuals()
        assert equivariance_check(model.action, model.section, pts, gs) < 1e-10
        assert max(momentum_generator_residual(model.momentum, a) for a in pts) < 1e-10


def test_time_translation_fails_basic_form(oscillator, rng):
    b = oscillator.bundle
    pts = oscillator.sample_points(rng, 10)
    rep = canonical_action_report(time_translation_action(b), b, pts, [0.5] * 10, [1.0] * 10, 1e-10)
    assert rep.symplecticity == 0.0 and rep.commutation == 0.0
    assert rep.basic_form == pytest.approx(1.0)
    assert not rep.passed
    assert canonical_action_report(trivial_action(b), b, pts, [0.5] * 10, [1.0] * 10, 1e-10).passed


def test_non_invariant_hamiltonian_detected(oscillator, rng):
    b = oscillator.bundle
    H = ScalarField(b.base_chart, lambda v: v[1], None, "q1")
    pts = oscillator.sample_points(rng, 10)
    assert equivariance_check(oscillator.action, HamiltonianSection(b, H), pts, [0.7] * 10) > 1e-2


@settings(max_examples=40, deadline=None)
@given(angles, angles)
def test_oscillator_action_group_law(g1, g2):
    osc = build_model("oscillator", {})
    a = np.array([0.3, -0.2, 0.8, -0.4, 0.5, 1.1])
    act = osc.action.apply_A
    assert np.allclose(act(g1, act(g2, a)), act(g1 + g2, a), atol=1e-12)
    assert np.allclose(act(-g1, act(g1, a)), a, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(angles, angles)
def test_heavy_top_state_action_group_law(g1, g2):
    ht = build_model("heavytop", {})
    y = ht.initial_state({}, 0.0, 0.3)
    lhs = ht.apply_state(g1, ht.apply_state(g2, y))
    rhs = ht.apply_state(g1 + g2, y)
    assert np.allclose(lhs[2:6], rhs[2:6], atol=1e-12) or np.allclose(lhs[2:6], -rhs[2:6], atol=1e-12)
    assert ht.momentum_of_state(lhs)[0] == pytest.approx(ht.momentum_of_state(y)[0], abs=1e-12)


def test_heavy_top_quotient_matches_matrix_formula(heavytop, rng):
    for a in heavytop.sample_points(rng, 20):
        A = euler_to_matrix(*a[2:5])
        y = heavytop.euler_to_state(a)
        Pi = y[6:9]
        q = A.T @ np.array([0.0, 0.0, 1.0])
        expected = np.concatenate([a[:2], q, np.cross(q, Pi)])
        assert np.allclose(heavytop.project_state(y), expected, atol=1e-12)


@pytest.mark.parametrize("nu", [1.0, -0.6])
def test_oscillator_reduction_validates(oscillator, rng, nu):
    chart = oscillator.reduction_chart(nu)
    red = reduce(oscillator.section, chart, oscillator.sample_level(rng, 30, nu), 1e-9, 1e-5)
    assert max(red.validation.residuals().values()) < 1e-5


@pytest.mark.parametrize("nu", [0.0, 0.8])
def test_heavy_top_reduction_validates(heavytop, rng, nu):
    chart = heavytop.reduction_chart(nu)
    red = reduce(heavytop.section, chart, heavytop.sample_level(rng, 20, nu), 1e-9, 1e-5)
    assert max(red.validation.residuals().values()) < 1e-5


def test_reduce_rejects_off_level_samples(oscillator, rng):
    chart = oscillator.reduction_chart(1.0)
    with pytest.raises(InvalidSampleError):
        reduce(oscillator.section, chart, oscillator.sample_level(rng, 3, 1.5), 1e-9, 1e-5)


def test_reduce_detects_wrong_reduced_system(oscillator, rng):
    wrong = oscillator.reduction_chart(1.0)
    right_level = oscillator.sample_level(rng, 5, 1.0)
    # the reduced Hamiltonian for level 2 paired with samples on level 1
    mismatched = type(wrong)(wrong.nu, wrong.momentum, wrong.quotient_A, wrong.quotient_V,
                             wrong.reduced_bundle, oscillator.reduced_section(2.0))
    with pytest.raises(ReductionMismatchError):
        reduce(oscillator.section, mismatched, right_level, 1e-9, 1e-5)


def test_consistency_flags_level_drift():
    states = np.zeros((3, 2))
    res = reduced_dynamics_consistency(states, lambda y: y, states, lambda y: 1e-3, 1e-6)
    assert res.discrepancy == 0.0 and res.drift_flagged
    with pytest.raises(ValueError):
        reduced_dynamics_consistency(states, lambda y: y, states[:2])


def test_cotangent_momentum_on_canonical_translation():
    b = canonical_bundle(2)
    shift_q1 = SymmetryAction(
        "q1-shift", 1, (VectorField(b.config_chart, lambda x: np.array([0.0, 1.0, 0.0])),),
        apply_A=lambda g, a: a + g * np.eye(6)[2], apply_V=lambda g, v: v + g * np.eye(5)[1],
        generators_A=lambda a: np.eye(6)[2][None, :])
    a = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6])
    assert cotangent_momentum(shift_q1, b.total_chart, a)[0] == 0.5


def test_heavy_top_momentum_identity_attitude(heavytop):
    y = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    assert heavytop.momentum_of_state(y)[0] == 1.0

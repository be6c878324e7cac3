import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from redbundle.bundle import canonical_bundle
from redbundle.families import polynomial_family
from redbundle.geometry import ScalarField, TwoForm, coordinate_function, differential
from redbundle.hamiltonian import (
    DegenerateStructureError,
    HamiltonianSection,
    cosymplectic_from_section,
    cosymplectic_ham_field,
    extended_hamiltonian,
    hamiltonian_vector_field,
    horizontal_projector,
    omega_reconstruction_residual,
    projection_consistency,
    reeb_field,
)
from redbundle.models import build_model

finite = st.floats(-2, 2, allow_nan=False)


def _section(n, H=None, grad=None):
    b = canonical_bundle(n)
    if H is None:
        d = b.base_chart.dim
        H, grad = (lambda v: 0.0), (lambda v: np.zeros(d))
    return HamiltonianSection(b, ScalarField(b.base_chart, H, grad, "H"))


def _nonlinear_section():
    b = canonical_bundle(2)
    fam = polynomial_family(b.base_chart, count=12)
    H = ScalarField(b.base_chart, lambda v: fam[7](v) + fam[11](v),
                    lambda v: differential(fam[7], v) + differential(fam[11], v), "H")
    return HamiltonianSection(b, H)


def test_extended_hamiltonian_constant():
    h = _section(1, lambda v: 3.0, lambda v: np.zeros(3))
    assert extended_hamiltonian(h)([0.0, 2.0, 0.4, -1.0]) == 5.0


def test_extended_hamiltonian_section_and_shift(rng):
    h = _nonlinear_section()
    F = extended_hamiltonian(h)
    for v in rng.uniform(-1, 1, size=(20, 5)):
        assert abs(F(h(v))) < 1e-12
        a = h.bundle.lift(v, 0.7)
        assert F(h.bundle.psi(2.5, a)) - F(a) == pytest.approx(2.5, abs=1e-12)


def test_oscillator_hamiltonian_field():
    osc = build_model("oscillator", {"sigma": "const:0", "F": "const:0.5"})
    F = extended_hamiltonian(osc.section)
    X = hamiltonian_vector_field(osc.bundle.omega, F, [0, 0, 1, 0, 0, 1])
    assert np.allclose(X, [1, 0, 0, 1, -1, 0], atol=1e-14)


def test_hamiltonian_field_trivial_cases():
    h = _section(2)
    b = h.bundle
    const = ScalarField(b.total_chart, lambda a: 4.0, lambda a: np.zeros(6))
    assert np.array_equal(hamiltonian_vector_field(b.omega, const, np.ones(6)), np.zeros(6))
    X = hamiltonian_vector_field(b.omega, extended_hamiltonian(h), np.ones(6))
    assert np.array_equal(X, [1, 0, 0, 0, 0, 0])


def test_hamiltonian_field_degenerate():
    b = canonical_bundle(1)
    zero = TwoForm(b.total_chart, lambda a: np.zeros((4, 4)), "zero")
    with pytest.raises(DegenerateStructureError):
        hamiltonian_vector_field(zero, coordinate_function(b.total_chart, "q1"), np.zeros(4))


def test_structure_for_zero_hamiltonian():
    h = _section(1)
    c = cosymplectic_from_section(h)
    v = np.array([0.3, 1.0, -2.0])
    assert np.array_equal(c.eta(v), [1, 0, 0])
    assert np.allclose(c.omega(v), [[0, 0, 0], [0, 0, 1], [0, -1, 0]])
    assert np.allclose(reeb_field(c, v), [1, 0, 0])


def test_local_formula_for_omega_h(rng):
    h = _nonlinear_section()
    c = cosymplectic_from_section(h)
    n = 2
    for v in rng.uniform(-1, 1, size=(10, 5)):
        g = differential(h.H, v)
        W = np.zeros((5, 5))
        for i in range(n):
            q, p = 1 + i, 1 + n + i
            W[0, q], W[q, 0] = -g[q], g[q]
            W[0, p], W[p, 0] = -g[p], g[p]
            W[q, p], W[p, q] = 1.0, -1.0
        assert np.allclose(c.omega(v), W, atol=1e-12)
        assert np.allclose(c.eta(v), [1, 0, 0, 0, 0])


def test_reduced_oscillator_reeb_point():
    osc = build_model("oscillator", {"sigma": "const:0", "F": "const:0"})
    c = cosymplectic_from_section(osc.reduced_section(1.0))
    assert np.allclose(reeb_field(c, [0.7, 1.0, 0.0]), [1, 0, 1], atol=1e-12)


def test_cosymplectic_ham_field_examples():
    h = _section(1)
    c = cosymplectic_from_section(h)
    chart = h.bundle.base_chart
    v = np.array([0.2, 0.5, -0.4])
    assert np.allclose(cosymplectic_ham_field(c, coordinate_function(chart, "t"), v), 0.0)
    X = cosymplectic_ham_field(c, coordinate_function(chart, "q1"), v)
    assert np.allclose(X, [0, 0, -1])


@settings(max_examples=40, deadline=None)
@given(arrays(float, 5, elements=finite), st.integers(0, 19))
def test_cosymplectic_field_is_eta_horizontal(v, k):
    h = _nonlinear_section()
    c = cosymplectic_from_section(h)
    tau = polynomial_family(h.bundle.base_chart)[k]
    assert abs(c.eta(v) @ cosymplectic_ham_field(c, tau, v)) < 1e-10


def test_horizontal_projector_of_time_direction(rng):
    h = _nonlinear_section()
    for a in rng.uniform(-1, 1, size=(10, 6)):
        dHdt = differential(h.H, h.bundle.mu(a))[0]
        out = horizontal_projector(h, a, [1, 0, 0, 0, 0, 0])
        assert np.allclose(out, [1, -dHdt, 0, 0, 0, 0], atol=1e-12)
        assert np.allclose(horizontal_projector(h, a, h.bundle.generator(a)), 0.0)


@settings(max_examples=40, deadline=None)
@given(arrays(float, 6, elements=finite), arrays(float, 6, elements=finite),
       arrays(float, 6, elements=finite))
def test_reconstruction_and_projection(a, u, w):
    h = _nonlinear_section()
    c = cosymplectic_from_section(h)
    assert omega_reconstruction_residual(h, a, u, w, c) < 1e-10
    assert omega_reconstruction_residual(h, a, u, u, c) < 1e-12
    assert projection_consistency(h, a, c) < 1e-10


def test_projection_consistency_zero_hamiltonian():
    h = _section(2)
    assert projection_consistency(h, np.arange(6.0)) == 0.0


def test_volume_check_flags_degenerate_structure():
    h = _section(1)
    b = h.bundle
    flat = HamiltonianSection(b.with_omega(TwoForm(b.total_chart, lambda a: np.zeros((4, 4)))), h.H)
    with pytest.raises(DegenerateStructureError):
        cosymplectic_from_section(flat, check_points=np.zeros((1, 3)))

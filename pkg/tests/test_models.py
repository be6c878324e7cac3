import math

import numpy as np
import pytest

from redbundle.bundle import MagneticTerm, magnetic_deform
from redbundle.config import ConfigError, build_config, parse_key_values
from redbundle.geometry import fd_jacobian
from redbundle.hamiltonian import HamiltonianSection, cosymplectic_from_section, reeb_field
from redbundle.models import ModelConfigError, build_model
from redbundle.models.heavy_top import MAGNETIC_SIGN, area_form, sphere_frame
from redbundle.symmetry import ReductionChart, ReductionMismatchError, reduce


def test_unknown_model_and_params():
    with pytest.raises(ModelConfigError):
        build_model("pendulum", {})
    with pytest.raises(ModelConfigError):
        build_model("oscillator", {"mass": "1"})
    with pytest.raises(ModelConfigError):
        build_model("heavytop", {"inertia": "1,2"})
    with pytest.raises(ModelConfigError):
        build_model("heavytop", {"inertia": "1,-2,3"})


def test_oscillator_polar_round_trip(oscillator, rng):
    for y in oscillator.sample_polar(rng, 20):
        assert np.allclose(oscillator.cartesian_to_polar(oscillator.polar_to_cartesian(y)), y, atol=1e-12)


def test_cartesian_and_polar_hamiltonians_agree(oscillator, rng):
    for y in oscillator.sample_polar(rng, 20):
        a = oscillator.polar_to_cartesian(y)
        assert oscillator.polar_hamiltonian(np.delete(y, 1)) == pytest.approx(
            oscillator.hamiltonian(np.delete(a, 1)), abs=1e-12)


def test_oscillator_reduced_hamiltonian(oscillator, rng):
    nu = 0.9
    h = oscillator.reduced_section(nu)
    for t, r, pr in rng.uniform([0, 0.5, -1], [5, 2, 1], size=(10, 3)):
        es, f = math.exp(oscillator.sigma(t)), oscillator.force(t)
        expected = es / 2 * (pr ** 2 + nu ** 2 / r ** 2) + f * r ** 2
        assert h.H([t, r, pr]) == pytest.approx(expected)


@pytest.mark.parametrize("sigma,force,nu", [("const:0", "const:0", 1.0),
                                            ("poly:0,0.1", "const:0.5", 1.0),
                                            ("sin:0.5,2,0.3", "poly:0.2,0.1", -0.7)])
def test_oscillator_reduced_reeb_formula(sigma, force, nu, rng):
    osc = build_model("oscillator", {"sigma": sigma, "F": force})
    c = cosymplectic_from_section(osc.reduced_section(nu))
    for t, r, pr in rng.uniform([0, 0.5, -2], [5, 2, 2], size=(20, 3)):
        es, f = math.exp(osc.sigma(t)), osc.force(t)
        expected = [1.0, es * pr, es * nu * nu / r ** 3 - 2 * f * r]
        assert np.allclose(reeb_field(c, [t, r, pr]), expected, atol=1e-10)


def test_area_form_sign():
    th, ph = 0.9, -0.4
    x, xt, xp = sphere_frame(th, ph)
    assert area_form(x, xt, xp) == pytest.approx(-math.sin(th))
    assert np.allclose(x, [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])


def test_sphere_hamiltonian_gradient(heavytop, rng):
    value, grad = heavytop.sphere_hamiltonian(0.6)
    for v in rng.uniform([0, 0.4, -3, -1, -1], [5, 2.7, 3, 1, 1], size=(10, 5)):
        assert np.allclose(grad(v), fd_jacobian(value, v), atol=1e-6)


@pytest.mark.parametrize("nu", [0.7, -1.3])
def test_reduced_magnetic_sign(heavytop, rng, nu):
    """Only one sign of the area-form deformation reproduces the full structure on a level set."""
    level = heavytop.sample_level(rng, 10, nu)
    used = heavytop.reduction_chart(nu)
    red = reduce(heavytop.section, used, level, 1e-9, 1e-6)
    assert red.validation.residuals()["reduced_omega_pullback"] < 1e-6

    sb = heavytop.sphere_bundle
    flipped = magnetic_deform(sb, MagneticTerm(heavytop.area_two_form(-MAGNETIC_SIGN * nu), sb.total_chart))
    wrong = ReductionChart(used.nu, used.momentum, used.quotient_A, used.quotient_V, flipped,
                           HamiltonianSection(flipped, used.reduced_section.H))
    with pytest.raises(ReductionMismatchError):
        reduce(heavytop.section, wrong, level, 1e-9, 1e-2)


def test_heavy_top_initial_state_level(heavytop):
    y = heavytop.initial_state({}, 0.0, 0.35)
    assert heavytop.level_residual_state(y, 0.35) < 1e-14
    explicit = heavytop.initial_state({"Pi1": 0.0, "Pi2": 0.0, "Pi3": 2.0}, 0.0, 0.35)
    assert heavytop.level_residual_state(explicit, 0.35) > 0.1


def test_config_parsing():
    values = parse_key_values("model = heavytop  # comment\n\ninertia = 1,1,1\nnu=0.5\n")
    cfg = build_config(values, {"dt": 0.01})
    assert cfg.model == "heavytop" and cfg.dt == 0.01 and cfg.nu == 0.5
    assert cfg.model_params == {"inertia": "1,1,1"}
    assert cfg.digest() == build_config(values, {"dt": 0.01}).digest()
    assert cfg.digest() != build_config(values, {"dt": 0.02}).digest()


@pytest.mark.parametrize("text", ["dt = -1", "t1 = 0", "foo = 1", "samples = 0", "dt = abc",
                                  "model = pendulum", "nu = 1\nnu = 2", "no equals sign",
                                  "integrator = euler", "sigma = const:0\nmodel = heavytop"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        build_config(parse_key_values(text))


def test_tolerance_overrides(monkeypatch):
    cfg = build_config({"tol_exact": "1e-8"})
    assert cfg.tolerances.exact == 1e-8
    assert cfg.tolerances.fd == 1e-5
    with pytest.raises(ConfigError):
        build_config({"tol_fd": "0"})
    monkeypatch.setenv("REDBUNDLE_TOL_OVERRIDE", "10")
    assert build_config({}).tolerances.exact == pytest.approx(1e-9)
    monkeypatch.setenv("REDBUNDLE_TOL_OVERRIDE", "-1")
    with pytest.raises(ConfigError):
        build_config({})

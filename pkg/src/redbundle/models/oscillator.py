"""Time-dependent damped planar oscillator with rotational symmetry.

``H = e^sigma(t)/2 |p|^2 + F(t) |q|^2`` on the Cartesian chart
``(t, p, q1, q2, p1, p2)``. The circle acts by clockwise rotation; the
momentum is the angular momentum ``q1 p2 - q2 p1``, which is ``p_theta`` in the
polar chart ``(t, p, theta, r, p_theta, p_r)``. Reducing at level ``nu``
leaves a radial system on ``(t, p, r, p_r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bundle import SymplecticRBundle, canonical_bundle
from ..coefficients import Coefficient, parse_coefficient
from ..geometry import Array, ScalarField, SmoothMap, VectorField
from ..hamiltonian import HamiltonianSection
from ..symmetry import MomentumMap, ReductionChart, SymmetryAction
from .base import ModelConfigError, take_float


def _rot(theta: float) -> Array:
    """Clockwise rotation by ``theta``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class OscillatorModel:
    sigma: Coefficient
    force: Coefficient
    r_min: float = 0.1
    r_low: float = 0.5
    r_high: float = 2.0
    t_high: float = 5.0
    momentum_bound: float = 2.0

    name = "oscillator"

    def __post_init__(self):
        if not 0 < self.r_min < self.r_low < self.r_high:
            raise ModelConfigError(
                f"oscillator test box must satisfy 0 < r_min < box_r_low < box_r_high, got "
                f"r_min={self.r_min}, box_r_low={self.r_low}, box_r_high={self.r_high}")
        if not (self.t_high > 0 and self.momentum_bound > 0):
            raise ModelConfigError("box_t_high and box_momentum must be positive")

    @classmethod
    def from_params(cls, params: dict) -> "OscillatorModel":
        params = dict(params)
        sigma = parse_coefficient(params.pop("sigma", "const:0"))
        force = parse_coefficient(params.pop("F", "const:0.5"))
        kw = {key: take_float(params, cfg) for key, cfg in
              (("r_min", "r_min"), ("r_low", "box_r_low"), ("r_high", "box_r_high"),
               ("t_high", "box_t_high"), ("momentum_bound", "box_momentum"))
              if cfg in params}
        if params:
            raise ModelConfigError(f"unknown oscillator parameters: {sorted(params)}")
        return cls(sigma, force, **kw)

    # charts and bundles

    @property
    def bundle(self) -> SymplecticRBundle:
        return canonical_bundle(2, ("q1", "q2"), ("p1", "p2"), name="oscillator.cartesian")

    @property
    def polar_bundle(self) -> SymplecticRBundle:
        return canonical_bundle(2, ("theta", "r"), ("p_theta", "p_r"), name="oscillator.polar")

    @property
    def reduced_bundle(self) -> SymplecticRBundle:
        return canonical_bundle(1, ("r",), ("p_r",), name="oscillator.reduced")

    # Hamiltonians on base charts

    def hamiltonian(self, v) -> float:
        t, q1, q2, p1, p2 = v
        return math.exp(self.sigma(t)) / 2 * (p1 * p1 + p2 * p2) + self.force(t) * (q1 * q1 + q2 * q2)

    def hamiltonian_grad(self, v) -> Array:
        t, q1, q2, p1, p2 = v
        es, f = math.exp(self.sigma(t)), self.force(t)
        kin, pot = (p1 * p1 + p2 * p2) / 2, q1 * q1 + q2 * q2
        return np.array([self.sigma.deriv(t) * es * kin + self.force.deriv(t) * pot,
                         2 * f * q1, 2 * f * q2, es * p1, es * p2])

    def polar_hamiltonian(self, v) -> float:
        t, _, r, pth, pr = v
        return math.exp(self.sigma(t)) / 2 * (pr * pr + pth * pth / (r * r)) + self.force(t) * r * r

    def polar_hamiltonian_grad(self, v) -> Array:
        t, _, r, pth, pr = v
        es, f = math.exp(self.sigma(t)), self.force(t)
        kin = (pr * pr + pth * pth / (r * r)) / 2
        return np.array([self.sigma.deriv(t) * es * kin + self.force.deriv(t) * r * r,
                         0.0, -es * pth * pth / r ** 3 + 2 * f * r, es * pth / (r * r), es * pr])

    def reduced_hamiltonian(self, nu: float):
        def value(v):
            t, r, pr = v
            return math.exp(self.sigma(t)) / 2 * (pr * pr + nu * nu / (r * r)) + self.force(t) * r * r

        def grad(v):
            t, r, pr = v
            es, f = math.exp(self.sigma(t)), self.force(t)
            kin = (pr * pr + nu * nu / (r * r)) / 2
            return np.array([self.sigma.deriv(t) * es * kin + self.force.deriv(t) * r * r,
                             -es * nu * nu / r ** 3 + 2 * f * r, es * pr])

        return value, grad

    @property
    def section(self) -> HamiltonianSection:
        b = self.bundle
        return HamiltonianSection(b, ScalarField(b.base_chart, self.hamiltonian, self.hamiltonian_grad, "H"))

    @property
    def polar_section(self) -> HamiltonianSection:
        b = self.polar_bundle
        return HamiltonianSection(
            b, ScalarField(b.base_chart, self.polar_hamiltonian, self.polar_hamiltonian_grad, "H_polar"))

    def reduced_section(self, nu: float) -> HamiltonianSection:
        b = self.reduced_bundle
        value, grad = self.reduced_hamiltonian(nu)
        return HamiltonianSection(b, ScalarField(b.base_chart, value, grad, "H_nu"))

    # chart transitions on total charts

    @staticmethod
    def cartesian_to_polar(a) -> Array:
        t, p, q1, q2, p1, p2 = a
        r = math.hypot(q1, q2)
        return np.array([t, p, math.atan2(q2, q1), r, q1 * p2 - q2 * p1, (q1 * p1 + q2 * p2) / r])

    @staticmethod
    def polar_to_cartesian(a) -> Array:
        t, p, th, r, pth, pr = a
        c, s = math.cos(th), math.sin(th)
        return np.array([t, p, r * c, r * s, pr * c - pth * s / r, pr * s + pth * c / r])

    # symmetry

    @property
    def action(self) -> SymmetryAction:
        config = self.bundle.config_chart

        def apply_A(theta, a):
            a = np.array(a, dtype=float)
            R = _rot(theta)
            a[2:4] = R @ a[2:4]
            a[4:6] = R @ a[4:6]
            return a

        def apply_V(theta, v):
            v = np.array(v, dtype=float)
            R = _rot(theta)
            v[1:3] = R @ v[1:3]
            v[3:5] = R @ v[3:5]
            return v

        def apply_M(theta, x):
            x = np.array(x, dtype=float)
            x[1:3] = _rot(theta) @ x[1:3]
            return x

        def jac(theta, a):
            J = np.eye(6)
            R = _rot(theta)
            J[2:4, 2:4] = R
            J[4:6, 4:6] = R
            return J

        # the algebra element xi generates the group element -xi, a counter-clockwise turn
        xi_M = VectorField(config, lambda x: np.array([0.0, -x[2], x[1]]), "xi_M")
        return SymmetryAction(
            name="rotation", algebra_dim=1, generators_M=(xi_M,),
            apply_A=apply_A, apply_V=apply_V, apply_M=apply_M,
            generators_A=lambda a: np.array([[0.0, 0.0, -a[3], a[2], -a[5], a[4]]]),
            jacobian_A=jac)

    @property
    def polar_action(self) -> SymmetryAction:
        config = self.polar_bundle.config_chart

        def shift(theta, y, index):
            y = np.array(y, dtype=float)
            y[index] -= theta
            return y

        e = np.zeros(6)
        e[2] = 1.0
        return SymmetryAction(
            name="rotation.polar", algebra_dim=1,
            generators_M=(VectorField(config, lambda x: np.array([0.0, 1.0, 0.0]), "d/dtheta"),),
            apply_A=lambda g, a: shift(g, a, 2), apply_V=lambda g, v: shift(g, v, 1),
            apply_M=lambda g, x: shift(g, x, 1),
            generators_A=lambda a: e[None, :].copy(), jacobian_A=lambda g, a: np.eye(6))

    @property
    def momentum(self) -> MomentumMap:
        return MomentumMap(self.bundle, self.action,
                           grad=lambda a: np.array([[0.0, 0.0, a[5], -a[4], -a[3], a[2]]]))

    @staticmethod
    def angular_momentum(y) -> float:
        return float(y[2] * y[5] - y[3] * y[4])

    # reduction

    def check_nu(self, nu: float) -> None:
        if not math.isfinite(nu):
            raise ModelConfigError(f"nu must be finite, got {nu}")

    def reduction_chart(self, nu: float) -> ReductionChart:
        self.check_nu(nu)
        b, rb = self.bundle, self.reduced_bundle

        def qA(a):
            t, p, q1, q2, p1, p2 = a
            r = math.hypot(q1, q2)
            return np.array([t, p, r, (q1 * p1 + q2 * p2) / r])

        def qA_jac(a):
            t, p, q1, q2, p1, p2 = a
            r = math.hypot(q1, q2)
            pr = (q1 * p1 + q2 * p2) / r
            J = np.zeros((4, 6))
            J[0, 0] = J[1, 1] = 1.0
            J[2, 2:4] = q1 / r, q2 / r
            J[3, 2:4] = (p1 - pr * q1 / r) / r, (p2 - pr * q2 / r) / r
            J[3, 4:6] = q1 / r, q2 / r
            return J

        quotient_A = SmoothMap(b.total_chart, rb.total_chart, qA, qA_jac)
        quotient_V = SmoothMap(
            b.base_chart, rb.base_chart,
            lambda v: np.delete(qA(np.insert(v, 1, 0.0)), 1),
            lambda v: np.delete(np.delete(qA_jac(np.insert(v, 1, 0.0)), 1, axis=0), 1, axis=1))
        return ReductionChart(np.array([float(nu)]), self.momentum, quotient_A, quotient_V,
                              rb, self.reduced_section(nu))

    # sampling

    def sample_polar(self, rng: np.random.Generator, count: int, nu: float | None = None) -> Array:
        m = self.momentum_bound
        u = rng.random((count, 6))
        pts = np.empty((count, 6))
        pts[:, 0] = self.t_high * u[:, 0]
        pts[:, 1] = m * (2 * u[:, 1] - 1)
        pts[:, 2] = math.pi * (2 * u[:, 2] - 1)
        pts[:, 3] = self.r_low + (self.r_high - self.r_low) * u[:, 3]
        pts[:, 4] = m * (2 * u[:, 4] - 1) if nu is None else nu
        pts[:, 5] = m * (2 * u[:, 5] - 1)
        return pts

    def sample_points(self, rng: np.random.Generator, count: int) -> Array:
        return np.array([self.polar_to_cartesian(a) for a in self.sample_polar(rng, count)])

    def sample_level(self, rng: np.random.Generator, count: int, nu: float) -> Array:
        return np.array([self.polar_to_cartesian(a) for a in self.sample_polar(rng, count, nu)])

    def sample_group(self, rng: np.random.Generator, count: int) -> list[float]:
        return list(math.pi * (2 * rng.random(count) - 1))

    # simulation

    state_names = ("t", "p", "q1", "q2", "p1", "p2")
    reduced_state_names = ("t", "p", "r", "p_r")

    def vector_field(self, y) -> Array:
        t, p, q1, q2, p1, p2 = y
        es, f = math.exp(self.sigma(t)), self.force(t)
        dHdt = self.sigma.deriv(t) * es * (p1 * p1 + p2 * p2) / 2 + self.force.deriv(t) * (q1 * q1 + q2 * q2)
        return np.array([1.0, -dHdt, es * p1, es * p2, -2 * f * q1, -2 * f * q2])

    def reduced_vector_field(self, nu: float):
        nu2 = nu * nu

        def field(y):
            t, p, r, pr = y
            es, f = math.exp(self.sigma(t)), self.force(t)
            dHdt = (self.sigma.deriv(t) * es * (pr * pr + nu2 / (r * r)) / 2
                    + self.force.deriv(t) * r * r)
            return np.array([1.0, -dHdt, es * pr, es * nu2 / r ** 3 - 2 * f * r])

        return field

    def momentum_of_state(self, y) -> Array:
        return np.array([self.angular_momentum(y)])

    def project_state(self, y) -> Array:
        t, p, q1, q2, p1, p2 = y
        r = math.hypot(q1, q2)
        return np.array([t, p, r, (q1 * p1 + q2 * p2) / r])

    def energy(self, y) -> float:
        return self.hamiltonian(np.delete(np.asarray(y, dtype=float), 1))

    def initial_state(self, params: dict, t0: float, nu: float | None) -> Array:
        """Initial condition from ``q1, q2, p1, p2, p`` keys; unset momenta follow ``nu``."""
        q1 = params.get("q1", 1.0)
        q2 = params.get("q2", 0.0)
        p = params.get("p", 0.0)
        p1 = params.get("p1", 0.3)
        if "p2" in params:
            p2 = params["p2"]
        else:
            # choose p2 so that q1 p2 - q2 p1 = nu (or 1 when no level is requested)
            target = 1.0 if nu is None else nu
            if q1 == 0.0:
                raise ModelConfigError("set p2 explicitly when q1 = 0")
            p2 = (target + q2 * p1) / q1
        y = np.array([t0, p, q1, q2, p1, p2], dtype=float)
        if math.hypot(q1, q2) <= self.r_min:
            raise ModelConfigError(f"initial radius must exceed r_min={self.r_min}")
        return y

    post_step = None

    def reduced_post_step(self, nu: float):
        return None

    def level_residual_state(self, y, nu: float) -> float:
        return abs(self.angular_momentum(y) - nu)

"""Time-dependent heavy top with symmetry about the vertical axis.

``H((A, t), Pi) = 1/2 <I^-1 Pi, Pi> + <A^-1 e3, gamma(t)>`` with ``Pi`` the body
angular momentum. Rotations ``A -> K A`` about ``e3`` are symmetries and
``J = A Pi . e3 = Pi . Gamma`` with ``Gamma = A^-1 e3``.

Three coordinate systems are used:

* simulation state ``(t, p, qw, qx, qy, qz, Pi1, Pi2, Pi3)``, the rotation held
  as a unit quaternion;
* the Euler chart ``A = Rz(phi) Rx(theta) Rz(psi)`` with conjugate momenta,
  a canonical chart on which the generic bundle checks run;
* the reduced state ``(t, p, q, p_q)`` with ``q = Gamma``, ``p_q = Gamma x Pi``
  on ``T*S^2``, and its spherical chart ``(t, p, vartheta, varphi, p_vartheta, p_varphi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..bundle import MagneticTerm, SymplecticRBundle, canonical_bundle, magnetic_deform
from ..coefficients import Coefficient, parse_coefficient
from ..geometry import Array, ScalarField, SmoothMap, TwoForm, VectorField
from ..hamiltonian import HamiltonianSection
from ..symmetry import MomentumMap, ReductionChart, SymmetryAction
from .base import ModelConfigError, take_float

# Sign in front of nu * area_form in the reduced magnetic term beta, so that the reduced
# symplectic form is Omega - beta = Omega + nu * area. Fixed by the reduction pullback check:
# with Omega = dq^dp and Pi = p_q x q + nu q, the opposite sign fails it by O(nu).
MAGNETIC_SIGN = -1.0


def quat_to_matrix(q) -> Array:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_mul(a, b) -> Array:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def z_rotation_quat(angle: float) -> Array:
    return np.array([math.cos(angle / 2), 0.0, 0.0, math.sin(angle / 2)])


def gamma_vector(q) -> Array:
    """``A^-1 e3``: the third row of the rotation matrix."""
    w, x, y, z = q
    return np.array([2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)])


def euler_to_matrix(phi: float, theta: float, psi: float) -> Array:
    cf, sf = math.cos(phi), math.sin(phi)
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(psi), math.sin(psi)
    Rz1 = np.array([[cf, -sf, 0], [sf, cf, 0], [0, 0, 1]])
    Rx = np.array([[1, 0, 0], [0, ct, -st], [0, st, ct]])
    Rz2 = np.array([[cp, -sp, 0], [sp, cp, 0], [0, 0, 1]])
    return Rz1 @ Rx @ Rz2


def matrix_to_euler(A) -> tuple[float, float, float]:
    theta = math.acos(max(-1.0, min(1.0, A[2, 2])))
    return math.atan2(A[0, 2], -A[1, 2]), theta, math.atan2(A[2, 0], A[2, 1])


def matrix_to_quat(A) -> Array:
    # Shepperd's method, branch on the largest diagonal combination
    tr = np.trace(A)
    cands = [tr, A[0, 0], A[1, 1], A[2, 2]]
    k = int(np.argmax(cands))
    if k == 0:
        s = math.sqrt(1 + tr) * 2
        q = [0.25 * s, (A[2, 1] - A[1, 2]) / s, (A[0, 2] - A[2, 0]) / s, (A[1, 0] - A[0, 1]) / s]
    elif k == 1:
        s = math.sqrt(1 + A[0, 0] - A[1, 1] - A[2, 2]) * 2
        q = [(A[2, 1] - A[1, 2]) / s, 0.25 * s, (A[0, 1] + A[1, 0]) / s, (A[0, 2] + A[2, 0]) / s]
    elif k == 2:
        s = math.sqrt(1 + A[1, 1] - A[0, 0] - A[2, 2]) * 2
        q = [(A[0, 2] - A[2, 0]) / s, (A[0, 1] + A[1, 0]) / s, 0.25 * s, (A[1, 2] + A[2, 1]) / s]
    else:
        s = math.sqrt(1 + A[2, 2] - A[0, 0] - A[1, 1]) * 2
        q = [(A[1, 0] - A[0, 1]) / s, (A[0, 2] + A[2, 0]) / s, (A[1, 2] + A[2, 1]) / s, 0.25 * s]
    q = np.array(q)
    return q / np.linalg.norm(q)


def body_velocity_matrix(theta: float, psi: float) -> Array:
    """``B`` with body angular velocity ``B (phi', theta', psi')``; momenta are ``B^T Pi``."""
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    return np.array([[st * sp, cp, 0.0], [st * cp, -sp, 0.0], [ct, 0.0, 1.0]])


def euler_momenta_to_body(theta, psi, p_phi, p_theta, p_psi) -> Array:
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(psi), math.cos(psi)
    a = (p_phi - ct * p_psi) / st
    return np.array([a * sp + p_theta * cp, a * cp - p_theta * sp, p_psi])


def sphere_frame(vartheta: float, varphi: float) -> tuple[Array, Array, Array]:
    """Point on the unit sphere and its two coordinate tangent vectors."""
    st, ct = math.sin(vartheta), math.cos(vartheta)
    sf, cf = math.sin(varphi), math.cos(varphi)
    x = np.array([st * cf, st * sf, ct])
    x_th = np.array([ct * cf, ct * sf, -st])
    x_ph = np.array([-st * sf, st * cf, 0.0])
    return x, x_th, x_ph


def cross(a, b) -> Array:
    """3-vector cross product; cheaper than ``np.cross`` for single vectors."""
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def area_form(x, u, v) -> float:
    """Oriented area form of the unit sphere, with the sign convention ``-x . (u x v)``."""
    return -float(x @ cross(u, v))


@dataclass(frozen=True)
class HeavyTopModel:
    inertia: tuple[float, float, float]
    gamma: tuple[Coefficient, Coefficient, Coefficient]
    t_high: float = 5.0
    momentum_bound: float = 2.0
    min_sin_theta: float = 0.2

    name = "heavytop"

    def __post_init__(self):
        if len(self.inertia) != 3 or not all(math.isfinite(i) and i > 0 for i in self.inertia):
            raise ModelConfigError(f"inertia must be three positive numbers, got {self.inertia}")
        if not (self.t_high > 0 and self.momentum_bound > 0):
            raise ModelConfigError("box_t_high and box_momentum must be positive")
        if not 0 < self.min_sin_theta < 1:
            raise ModelConfigError("min_sin_theta must lie in (0, 1)")

    @classmethod
    def from_params(cls, params: dict) -> "HeavyTopModel":
        params = dict(params)
        raw = params.pop("inertia", "1,1.5,2")
        try:
            inertia = tuple(float(v) for v in str(raw).split(","))
        except ValueError as exc:
            raise ModelConfigError(f"inertia must be comma-separated numbers, got {raw!r}") from exc
        if len(inertia) != 3:
            raise ModelConfigError(f"inertia needs three entries, got {raw!r}")
        defaults = ("const:0", "const:0", "const:1")
        gamma = tuple(parse_coefficient(params.pop(f"gamma{k + 1}", defaults[k])) for k in range(3))
        kw = {key: take_float(params, cfg) for key, cfg in
              (("t_high", "box_t_high"), ("momentum_bound", "box_momentum"),
               ("min_sin_theta", "min_sin_theta")) if cfg in params}
        if params:
            raise ModelConfigError(f"unknown heavytop parameters: {sorted(params)}")
        return cls(inertia, gamma, **kw)

    @property
    def inv_inertia(self) -> Array:
        return 1.0 / np.array(self.inertia)

    def gamma_at(self, t: float) -> Array:
        return np.array([g(t) for g in self.gamma])

    def gamma_rate(self, t: float) -> Array:
        return np.array([g.deriv(t) for g in self.gamma])

    def energy_body(self, t: float, Gamma, Pi) -> float:
        return 0.5 * float(Pi @ (self.inv_inertia * Pi)) + float(Gamma @ self.gamma_at(t))

    # Euler chart

    @property
    def bundle(self) -> SymplecticRBundle:
        return canonical_bundle(3, ("phi", "theta", "psi"), ("p_phi", "p_theta", "p_psi"),
                                name="heavytop.euler")

    def euler_hamiltonian(self, v) -> float:
        t, _, theta, psi, pf, pt, pp = v
        st, ct = math.sin(theta), math.cos(theta)
        Gamma = np.array([st * math.sin(psi), st * math.cos(psi), ct])
        return self.energy_body(t, Gamma, euler_momenta_to_body(theta, psi, pf, pt, pp))

    def euler_hamiltonian_grad(self, v) -> Array:
        t, _, theta, psi, pf, pt, pp = v
        st, ct = math.sin(theta), math.cos(theta)
        sp, cp = math.sin(psi), math.cos(psi)
        a = (pf - ct * pp) / st
        Pi = np.array([a * sp + pt * cp, a * cp - pt * sp, pp])
        w = self.inv_inertia * Pi
        g = self.gamma_at(t)
        da_dth = pp - (pf - ct * pp) * ct / (st * st)
        dPi = {
            "theta": np.array([da_dth * sp, da_dth * cp, 0.0]),
            "psi": np.array([Pi[1], -Pi[0], 0.0]),
            "pf": np.array([sp, cp, 0.0]) / st,
            "pt": np.array([cp, -sp, 0.0]),
            "pp": np.array([-ct / st * sp, -ct / st * cp, 1.0]),
        }
        dG_th = np.array([ct * sp, ct * cp, -st])
        dG_ps = np.array([st * cp, -st * sp, 0.0])
        Gamma = np.array([st * sp, st * cp, ct])
        return np.array([
            float(Gamma @ self.gamma_rate(t)),
            0.0,
            float(w @ dPi["theta"] + g @ dG_th),
            float(w @ dPi["psi"] + g @ dG_ps),
            float(w @ dPi["pf"]),
            float(w @ dPi["pt"]),
            float(w @ dPi["pp"]),
        ])

    @property
    def section(self) -> HamiltonianSection:
        b = self.bundle
        return HamiltonianSection(
            b, ScalarField(b.base_chart, self.euler_hamiltonian, self.euler_hamiltonian_grad, "H"))

    def euler_to_state(self, a) -> Array:
        t, p, phi, theta, psi, pf, pt, pp = a
        q = matrix_to_quat(euler_to_matrix(phi, theta, psi))
        return np.concatenate([[t, p], q, euler_momenta_to_body(theta, psi, pf, pt, pp)])

    def state_to_euler(self, y) -> Array:
        t, p = y[0], y[1]
        phi, theta, psi = matrix_to_euler(quat_to_matrix(y[2:6]))
        mom = body_velocity_matrix(theta, psi).T @ y[6:9]
        return np.array([t, p, phi, theta, psi, *mom])

    # symmetry: K(angle) = rotation about e3 by -angle, so phi -> phi - angle

    @property
    def action(self) -> SymmetryAction:
        config = self.bundle.config_chart

        def shift(g, y, index):
            y = np.array(y, dtype=float)
            y[index] -= g
            return y

        e = np.zeros(8)
        e[2] = 1.0
        return SymmetryAction(
            name="vertical-rotation", algebra_dim=1,
            generators_M=(VectorField(config, lambda x: np.array([0.0, 1.0, 0.0, 0.0]), "d/dphi"),),
            apply_A=lambda g, a: shift(g, a, 2), apply_V=lambda g, v: shift(g, v, 1),
            apply_M=lambda g, x: shift(g, x, 1),
            generators_A=lambda a: e[None, :].copy(), jacobian_A=lambda g, a: np.eye(8))

    def apply_state(self, angle: float, y) -> Array:
        """Left multiplication of the attitude by ``K(angle)`` on a simulation state."""
        y = np.array(y, dtype=float)
        y[2:6] = quat_mul(z_rotation_quat(-angle), y[2:6])
        return y

    @property
    def momentum(self) -> MomentumMap:
        def grad(a):
            g = np.zeros((1, 8))
            g[0, 5] = 1.0
            return g

        return MomentumMap(self.bundle, self.action, grad=grad)

    # reduced spherical chart

    @property
    def sphere_bundle(self) -> SymplecticRBundle:
        return canonical_bundle(2, ("vartheta", "varphi"), ("p_vartheta", "p_varphi"),
                                name="heavytop.sphere")

    def area_two_form(self, scale: float) -> TwoForm:
        """``scale`` times the sphere's area form, on the configuration chart ``(t, vartheta, varphi)``."""
        config = self.sphere_bundle.config_chart

        def beta(x):
            s, xt, xp = sphere_frame(x[1], x[2])
            val = scale * area_form(s, xt, xp)
            out = np.zeros((3, 3))
            out[1, 2], out[2, 1] = val, -val
            return out

        return TwoForm(config, beta, "nu*area")

    def reduced_magnetic_term(self, nu: float) -> MagneticTerm:
        return MagneticTerm(self.area_two_form(MAGNETIC_SIGN * nu), self.sphere_bundle.total_chart)

    def reduced_sphere_bundle(self, nu: float) -> SymplecticRBundle:
        b = self.sphere_bundle
        if nu == 0.0:
            return b
        return magnetic_deform(b, self.reduced_magnetic_term(nu))

    def sphere_body_momentum(self, v, nu: float) -> tuple[Array, Array]:
        """``(q, Pi)`` from a spherical base point, with ``Pi = p_q x q + nu q``."""
        _, th, ph, pth, pph = v
        x, xt, xp = sphere_frame(th, ph)
        pq = pth * xt + pph * xp / math.sin(th) ** 2
        return x, cross(pq, x) + nu * x

    def sphere_hamiltonian(self, nu: float):
        def value(v):
            q, Pi = self.sphere_body_momentum(v, nu)
            return self.energy_body(v[0], q, Pi)

        def grad(v):
            t, th, ph, a, b = v
            s, c = math.sin(th), math.cos(th)
            sf, cf = math.sin(ph), math.cos(ph)
            x, xt, xp = sphere_frame(th, ph)
            u = np.array([-sf / s, cf / s, 0.0])  # x_phi / sin^2
            pq = a * xt + b * u
            Pi = cross(pq, x) + nu * x
            w = self.inv_inertia * Pi
            g = self.gamma_at(t)
            dx = {"th": xt, "ph": xp, "a": np.zeros(3), "b": np.zeros(3)}
            dpq = {
                "th": -a * x + b * np.array([sf * c / s ** 2, -cf * c / s ** 2, 0.0]),
                "ph": a * np.array([-c * sf, c * cf, 0.0]) + b * np.array([-cf / s, -sf / s, 0.0]),
                "a": xt,
                "b": u,
            }
            out = [float(x @ self.gamma_rate(t))]
            for k in ("th", "ph", "a", "b"):
                dPi = cross(dpq[k], x) + cross(pq, dx[k]) + nu * dx[k]
                out.append(float(w @ dPi + g @ dx[k]))
            return np.array(out)

        return value, grad

    def reduced_section(self, nu: float) -> HamiltonianSection:
        b = self.reduced_sphere_bundle(nu)
        value, grad = self.sphere_hamiltonian(nu)
        return HamiltonianSection(b, ScalarField(b.base_chart, value, grad, "H_nu"))

    @staticmethod
    def euler_to_sphere(a) -> Array:
        """Quotient on total charts: ``q = Gamma``, ``p_q = Gamma x Pi`` in spherical coordinates."""
        t, p, _, theta, psi, pf, pt, pp = a
        Pi = euler_momenta_to_body(theta, psi, pf, pt, pp)
        varphi = math.pi / 2 - psi
        x, xt, xp = sphere_frame(theta, varphi)
        pq = cross(x, Pi)
        return np.array([t, p, theta, varphi, pq @ xt, pq @ xp])

    def check_nu(self, nu: float) -> None:
        if not math.isfinite(nu):
            raise ModelConfigError(f"nu must be finite, got {nu}")

    def reduction_chart(self, nu: float) -> ReductionChart:
        self.check_nu(nu)
        b = self.bundle
        rb = self.reduced_sphere_bundle(nu)
        quotient_A = SmoothMap(b.total_chart, rb.total_chart, self.euler_to_sphere)
        quotient_V = SmoothMap(b.base_chart, rb.base_chart,
                               lambda v: np.delete(self.euler_to_sphere(np.insert(v, 1, 0.0)), 1))
        return ReductionChart(np.array([float(nu)]), self.momentum, quotient_A, quotient_V,
                              rb, self.reduced_section(nu))

    # sampling

    def sample_attitudes(self, rng: np.random.Generator, count: int) -> list[tuple[float, float, float]]:
        """Euler angles of uniformly random attitudes, away from the chart's singular set."""
        out = []
        while len(out) < count:
            q = rng.normal(size=4)
            q /= np.linalg.norm(q)
            angles = matrix_to_euler(quat_to_matrix(q))
            if math.sin(angles[1]) >= self.min_sin_theta:
                out.append(angles)
        return out

    def sample_body_momenta(self, rng: np.random.Generator, count: int) -> Array:
        d = rng.normal(size=(count, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return d * (self.momentum_bound * rng.random((count, 1)) ** (1 / 3))

    def sample_points(self, rng: np.random.Generator, count: int) -> Array:
        angles = self.sample_attitudes(rng, count)
        Pis = self.sample_body_momenta(rng, count)
        tp = rng.random((count, 2))
        pts = np.empty((count, 8))
        for i, ((phi, theta, psi), Pi) in enumerate(zip(angles, Pis)):
            mom = body_velocity_matrix(theta, psi).T @ Pi
            pts[i] = [self.t_high * tp[i, 0], self.momentum_bound * (2 * tp[i, 1] - 1),
                      phi, theta, psi, *mom]
        return pts

    def sample_level(self, rng: np.random.Generator, count: int, nu: float) -> Array:
        pts = self.sample_points(rng, count)
        pts[:, 5] = nu
        return pts

    def sample_group(self, rng: np.random.Generator, count: int) -> list[float]:
        return list(math.pi * (2 * rng.random(count) - 1))

    # simulation

    state_names = ("t", "p", "qw", "qx", "qy", "qz", "Pi1", "Pi2", "Pi3")
    reduced_state_names = ("t", "p", "q1", "q2", "q3", "pq1", "pq2", "pq3")

    def vector_field(self, y) -> Array:
        t = y[0]
        quat, Pi = y[2:6], y[6:9]
        w = self.inv_inertia * Pi
        Gamma = gamma_vector(quat)
        dq = 0.5 * quat_mul(quat, np.array([0.0, *w]))
        dPi = cross(Pi, w) + cross(Gamma, self.gamma_at(t))
        dp = -float(Gamma @ self.gamma_rate(t))
        return np.concatenate([[1.0, dp], dq, dPi])

    def reduced_vector_field(self, nu: float):
        """``q' = q x w``, ``p_q' = p_q x w - gamma + <q, gamma> q`` with ``w = I^-1 (p_q x q + nu q)``."""
        inv = self.inv_inertia

        def field(y):
            t = y[0]
            q, pq = y[2:5], y[5:8]
            w = inv * (cross(pq, q) + nu * q)
            g = self.gamma_at(t)
            dq = cross(q, w)
            dpq = cross(pq, w) - g + (q @ g) * q
            return np.concatenate([[1.0, -float(q @ self.gamma_rate(t))], dq, dpq])

        return field

    @staticmethod
    def post_step(y) -> Array:
        y = np.array(y, dtype=float)
        y[2:6] /= np.linalg.norm(y[2:6])
        return y

    def reduced_post_step(self, nu: float):
        def project(y):
            y = np.array(y, dtype=float)
            q = y[2:5] / np.linalg.norm(y[2:5])
            y[2:5] = q
            y[5:8] -= (y[5:8] @ q) * q
            return y

        return project

    @staticmethod
    def constraint_drift(y) -> float:
        return abs(float(np.linalg.norm(y[2:6])) - 1.0)

    @staticmethod
    def reduced_constraint_drift(y) -> float:
        q = y[2:5]
        return max(abs(float(np.linalg.norm(q)) - 1.0), abs(float(q @ y[5:8])))

    def momentum_of_state(self, y) -> Array:
        return np.array([float(y[6:9] @ gamma_vector(y[2:6]))])

    def project_state(self, y) -> Array:
        Gamma = gamma_vector(y[2:6])
        return np.concatenate([y[:2], Gamma, cross(Gamma, y[6:9])])

    def energy(self, y) -> float:
        return self.energy_body(y[0], gamma_vector(y[2:6]), y[6:9])

    def initial_state(self, params: dict, t0: float, nu: float | None) -> Array:
        """Initial condition from ``qw..qz, Pi1..Pi3, p`` keys.

        When ``Pi`` is not fully given, its component along ``Gamma`` is set to ``nu``.
        """
        quat = np.array([params.get(k, d) for k, d in
                         (("qw", math.cos(0.3)), ("qx", math.sin(0.3)), ("qy", 0.0), ("qz", 0.0))])
        norm = np.linalg.norm(quat)
        if not norm > 0:
            raise ModelConfigError("initial quaternion must be nonzero")
        quat = quat / norm
        Pi = np.array([params.get(k, d) for k, d in (("Pi1", 0.4), ("Pi2", -0.2), ("Pi3", 0.3))])
        if nu is not None and not all(k in params for k in ("Pi1", "Pi2", "Pi3")):
            Gamma = gamma_vector(quat)
            Pi = Pi - (Pi @ Gamma) * Gamma + nu * Gamma
        return np.concatenate([[t0, params.get("p", 0.0)], quat, Pi])

    def level_residual_state(self, y, nu: float) -> float:
        return abs(float(self.momentum_of_state(y)[0]) - nu)

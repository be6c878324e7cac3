"""Hamiltonian sections, extended Hamiltonians and the induced cosymplectic structure.

A time-dependent Hamiltonian ``H(t, q, p_i)`` on the base defines the section
``h(v) = (t, -H(v), q, p_i)`` and the extended Hamiltonian ``F_h = p + H`` on
the total space. Pulling ``Omega`` and ``-i_Z Omega`` back along ``h`` gives a
cosymplectic pair ``(omega_h, eta_h)`` on the base whose Reeb field carries
the Hamilton equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundle import P_INDEX, SymplecticRBundle, base_poisson_bracket
from .geometry import (
    Array,
    Chart,
    DimensionError,
    OneForm,
    ScalarField,
    SmoothMap,
    TwoForm,
    closedness_residual,
    differential,
    one_form_closedness_residual,
    pullback_one_form,
    pullback_two_form,
)


class DegenerateStructureError(np.linalg.LinAlgError):
    def __init__(self, what: str, point):
        self.point = np.asarray(point, dtype=float).tolist()
        super().__init__(f"{what} is degenerate at {self.point}")


@dataclass(frozen=True)
class HamiltonianSection:
    bundle: SymplecticRBundle
    H: ScalarField

    def __post_init__(self):
        if self.H.chart.dim != self.bundle.base_chart.dim:
            raise DimensionError("H must be a function on the base chart")

    def __call__(self, v) -> Array:
        v = self.bundle.base_chart.check_point(v)
        return self.bundle.lift(v, -self.H(v))

    def jacobian(self, v) -> Array:
        v = self.bundle.base_chart.check_point(v)
        d = v.size
        J = np.insert(np.eye(d), P_INDEX, -differential(self.H, v), axis=0)
        return J

    def as_map(self) -> SmoothMap:
        return SmoothMap(self.bundle.base_chart, self.bundle.total_chart, self.__call__, self.jacobian)


def extended_hamiltonian(h: HamiltonianSection) -> ScalarField:
    """``F_h(t, p, q, p_i) = p + H(t, q, p_i)``."""
    H = h.H

    def value(a):
        return a[P_INDEX] + H(np.delete(a, P_INDEX))

    grad = None
    if H.grad is not None:
        grad = lambda a: np.insert(differential(H, np.delete(a, P_INDEX)), P_INDEX, 1.0)
    return ScalarField(h.bundle.total_chart, value, grad, "F_h")


def hamiltonian_vector_field(omega: TwoForm, F: ScalarField, a) -> Array:
    """The vector ``X`` with ``i_X Omega = dF`` at ``a``."""
    a = omega.chart.check_point(a)
    try:
        return np.linalg.solve(omega(a).T, differential(F, a))
    except np.linalg.LinAlgError as exc:
        raise DegenerateStructureError(omega.name, a) from exc


@dataclass(frozen=True)
class CosymplecticStructure:
    chart: Chart
    omega: TwoForm
    eta: OneForm

    def __post_init__(self):
        if self.chart.dim % 2 != 1:
            raise DimensionError("a cosymplectic chart has odd dimension")

    def system_matrix(self, v) -> Array:
        """``omega^T + eta eta^T``: its kernel-free-ness is equivalent to nondegeneracy."""
        W, e = self.omega(v), self.eta(v)
        return W.T + np.outer(e, e)

    def volume_determinant(self, v) -> float:
        """Determinant of ``omega`` bordered by ``eta``; nonzero iff ``eta ^ omega^n`` is a volume."""
        W, e = self.omega(v), self.eta(v)
        d = W.shape[0]
        M = np.zeros((d + 1, d + 1))
        M[:d, :d] = W
        M[:d, d] = e
        M[d, :d] = -e
        return float(np.linalg.det(M))

    def solve(self, v, rhs: Array, what: str) -> Array:
        v = self.chart.check_point(v)
        try:
            return np.linalg.solve(self.system_matrix(v), rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateStructureError(what, v) from exc

    def axiom_residuals(self, v) -> dict[str, float]:
        R = reeb_field(self, v)
        return {
            "omega_closed": closedness_residual(self.omega, v),
            "eta_closed": one_form_closedness_residual(self.eta, v),
            "volume_determinant": abs(self.volume_determinant(v)),
            "reeb_omega": float(np.max(np.abs(R @ self.omega(v)))),
            "reeb_eta": abs(float(self.eta(v) @ R) - 1.0),
        }


def cosymplectic_from_section(h: HamiltonianSection, check_points: Array | None = None,
                              det_floor: float = 1e-12) -> CosymplecticStructure:
    """``omega_h = h^* Omega`` and ``eta_h = -h^*(i_Z Omega)``."""
    section = h.as_map()
    omega = h.bundle.omega
    zeta = h.bundle.zeta()
    chart = h.bundle.base_chart
    omega_h = TwoForm(chart, lambda v: pullback_two_form(section, omega, v), "omega_h")
    eta_h = OneForm(chart, lambda v: -pullback_one_form(section, zeta, v), "eta_h")
    c = CosymplecticStructure(chart, omega_h, eta_h)
    if check_points is not None:
        for v in np.atleast_2d(check_points):
            if not abs(c.volume_determinant(v)) > det_floor:
                raise DegenerateStructureError("eta_h ^ omega_h^n", v)
    return c


def reeb_field(c: CosymplecticStructure, v) -> Array:
    """Unique ``R`` with ``i_R omega = 0`` and ``eta(R) = 1``."""
    return c.solve(v, c.eta(v), "Reeb system")


def cosymplectic_ham_field(c: CosymplecticStructure, tau: ScalarField, v) -> Array:
    """Unique ``X`` with ``i_X omega = dtau - R(tau) eta`` and ``eta(X) = 0``."""
    v = c.chart.check_point(v)
    dtau = differential(tau, v)
    R = reeb_field(c, v)
    return c.solve(v, dtau - (dtau @ R) * c.eta(v), "cosymplectic Hamiltonian system")


def cosymplectic_bracket(c: CosymplecticStructure, f: ScalarField, g: ScalarField, v) -> float:
    """``{f, g} = df(X_g)`` with ``X_g`` the cosymplectic Hamiltonian field of ``g``."""
    return float(differential(f, v) @ cosymplectic_ham_field(c, g, v))


def horizontal_projector(h: HamiltonianSection, a, X) -> Array:
    """``X - dF_h(X) Z``: kills the vertical part along the connection ``dF_h``."""
    a = h.bundle.total_chart.check_point(a)
    X = np.asarray(X, dtype=float)
    dF = differential(extended_hamiltonian(h), a)
    return X - (dF @ X) * h.bundle.generator(a)


def omega_reconstruction_residual(h: HamiltonianSection, a, u, w,
                                  c: CosymplecticStructure | None = None) -> float:
    """``|Omega(u, w) - (mu^* omega_h)(u, w) + (dF_h ^ mu^* eta_h)(u, w)|`` at ``a``."""
    bundle = h.bundle
    c = cosymplectic_from_section(h) if c is None else c
    a = bundle.total_chart.check_point(a)
    u, w = np.asarray(u, dtype=float), np.asarray(w, dtype=float)
    v = bundle.mu(a)
    P = bundle.mu_jacobian()
    Pu, Pw = P @ u, P @ w
    dF = differential(extended_hamiltonian(h), a)
    eta = c.eta(v)
    lhs = u @ bundle.omega(a) @ w
    rhs = Pu @ c.omega(v) @ Pw - (dF @ u * (eta @ Pw) - dF @ w * (eta @ Pu))
    return abs(lhs - rhs)


def projection_consistency(h: HamiltonianSection, a,
                           c: CosymplecticStructure | None = None) -> float:
    """``|T mu(H_{F_h}(a)) - R_h(mu(a))|_inf``."""
    c = cosymplectic_from_section(h) if c is None else c
    X = hamiltonian_vector_field(h.bundle.omega, extended_hamiltonian(h), a)
    return float(np.max(np.abs(h.bundle.mu_jacobian() @ X - reeb_field(c, h.bundle.mu(a)))))


def bracket_equality_residual(h: HamiltonianSection, f: ScalarField, g: ScalarField, v,
                              c: CosymplecticStructure | None = None) -> float:
    """Bundle-induced base bracket against the cosymplectic bracket of ``(omega_h, eta_h)``."""
    c = cosymplectic_from_section(h) if c is None else c
    return abs(base_poisson_bracket(h.bundle, f, g, v) - cosymplectic_bracket(c, f, g, v))


def bracket_matrices(h: HamiltonianSection, c: CosymplecticStructure, fields, v) -> tuple[Array, Array]:
    """All pairwise brackets of ``fields`` at ``v``, bundle-induced and cosymplectic."""
    bundle = h.bundle
    v = bundle.base_chart.check_point(v)
    D = np.array([differential(f, v) for f in fields])
    a = bundle.lift(v, 0.0)
    Dt = np.insert(D, P_INDEX, 0.0, axis=1)
    W = bundle.omega(a)
    try:
        induced = Dt @ np.linalg.solve(W.T, Dt.T)
    except np.linalg.LinAlgError as exc:
        raise DegenerateStructureError(bundle.omega.name, a) from exc
    eta = c.eta(v)
    R = reeb_field(c, v)
    rhs = D - np.outer(D @ R, eta)
    X = c.solve(v, rhs.T, "cosymplectic Hamiltonian system")
    return induced, D @ X

"""Symplectic principal R-bundles in canonical coordinates.

Total space coordinates are ``(t, p, q1..qn, p1..pn)`` with
``Omega = dt^dp + sum dq^i ^ dp_i``; the base drops ``p``. The principal
R-action translates ``p`` and its generator is ``d/dp``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import (
    Array,
    Chart,
    ChartError,
    DimensionError,
    OneForm,
    ScalarField,
    TwoForm,
    VectorField,
    base_point,
    constant_two_form,
    differential,
    embed_basic,
    interior_product,
    vertical_lift,
)

P_INDEX = 1


class SingularFormError(np.linalg.LinAlgError):
    """A 2-form that should be nondegenerate is singular at a point."""

    def __init__(self, what: str, point):
        self.point = np.asarray(point, dtype=float).tolist()
        super().__init__(f"{what} is singular at {self.point}")


class SingularDeformationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class PrincipalAction:
    """Translation of the ``p`` coordinate: ``apply(s, a) = a + s e_p``."""

    chart: Chart
    p_index: int = P_INDEX

    def apply(self, s: float, a) -> Array:
        out = self.chart.check_point(a).copy()
        out[self.p_index] += s
        return out

    __call__ = apply


@dataclass(frozen=True)
class SymplecticRBundle:
    n: int
    total_chart: Chart
    base_chart: Chart
    config_chart: Chart
    omega: TwoForm
    action: PrincipalAction = field(repr=False)

    @property
    def generator(self) -> VectorField:
        e = np.zeros(self.total_chart.dim)
        e[P_INDEX] = 1.0
        return VectorField(self.total_chart, lambda a: e.copy(), "Z_mu")

    def mu(self, a) -> Array:
        a = self.total_chart.check_point(a)
        return np.delete(a, P_INDEX)

    def mu_jacobian(self) -> Array:
        return np.delete(np.eye(self.total_chart.dim), P_INDEX, axis=0)

    def psi(self, s: float, a) -> Array:
        return self.action.apply(s, a)

    def lift(self, v, p: float = 0.0) -> Array:
        """The point over ``v`` whose ``p`` coordinate is ``p``."""
        v = self.base_chart.check_point(v)
        return np.insert(v, P_INDEX, p)

    def zeta(self) -> OneForm:
        """``i_Z Omega`` as a 1-form on the total chart."""
        Z = self.generator
        return OneForm(self.total_chart, lambda a: interior_product(Z, self.omega, a), "zeta_mu")

    def lift_function(self, f: ScalarField) -> ScalarField:
        """``f o mu`` on the total chart, gradient included when ``f`` has one."""
        if f.chart.dim != self.base_chart.dim:
            raise DimensionError(f"{f.name} is not a function on the base chart")
        grad = None
        if f.grad is not None:
            grad = lambda a: np.insert(differential(f, np.delete(a, P_INDEX)), P_INDEX, 0.0)
        return ScalarField(self.total_chart, lambda a: f(np.delete(a, P_INDEX)), grad, f"{f.name}*mu")

    def with_omega(self, omega: TwoForm) -> "SymplecticRBundle":
        return SymplecticRBundle(self.n, self.total_chart, self.base_chart,
                                 self.config_chart, omega, self.action)


def canonical_bundle(n: int, q_names: Sequence[str] | None = None,
                     p_names: Sequence[str] | None = None,
                     name: str = "canonical") -> SymplecticRBundle:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    q_names = tuple(q_names) if q_names is not None else tuple(f"q{i + 1}" for i in range(n))
    p_names = tuple(p_names) if p_names is not None else tuple(f"p{i + 1}" for i in range(n))
    if len(q_names) != n or len(p_names) != n:
        raise ValueError("need exactly n position and n momentum names")

    total = Chart(
        f"{name}.total", ("t", "p") + q_names + p_names,
        base_indices=(0,) + tuple(range(2, n + 2)),
        fiber_indices=(1,) + tuple(range(n + 2, 2 * n + 2)))
    base = Chart(
        f"{name}.base", ("t",) + q_names + p_names,
        base_indices=tuple(range(n + 1)),
        fiber_indices=(None,) + tuple(range(n + 1, 2 * n + 1)))
    config = Chart(f"{name}.config", ("t",) + q_names)

    W = np.zeros((2 * n + 2, 2 * n + 2))
    W[0, 1], W[1, 0] = 1.0, -1.0
    for i in range(n):
        W[2 + i, n + 2 + i], W[n + 2 + i, 2 + i] = 1.0, -1.0
    omega = constant_two_form(total, W)
    omega = TwoForm(total, omega.func, "Omega")
    return SymplecticRBundle(n, total, base, config, omega, PrincipalAction(total))


def poisson_tensor(omega: TwoForm, a) -> Array:
    """``Lambda(a) = -Omega(a)^{-1}``, so that ``X_F = Lambda dF`` solves ``i_X Omega = dF``."""
    W = omega(a)
    try:
        return -np.linalg.inv(W)
    except np.linalg.LinAlgError as exc:
        raise SingularFormError(omega.name, a) from exc


def symplectic_bracket(bundle: SymplecticRBundle, F: ScalarField, G: ScalarField, a,
                       omega: TwoForm | None = None) -> float:
    """``{F, G}(a) = dF . Lambda . dG``; ``{q, p} = 1`` in canonical coordinates."""
    omega = bundle.omega if omega is None else omega
    for f in (F, G):
        if f.chart.dim != bundle.total_chart.dim:
            raise DimensionError(f"{f.name} is not a function on the total chart")
    a = bundle.total_chart.check_point(a)
    return float(differential(F, a) @ poisson_tensor(omega, a) @ differential(G, a))


def base_poisson_bracket(bundle: SymplecticRBundle, f: ScalarField, g: ScalarField, v,
                         p: float = 0.0) -> float:
    """Bracket on the base induced by requiring ``mu`` to be a Poisson map."""
    a = bundle.lift(v, p)
    return symplectic_bracket(bundle, bundle.lift_function(f), bundle.lift_function(g), a)


@dataclass(frozen=True)
class MagneticTerm:
    """A closed 2-form ``beta`` on configuration space ``(t, q)`` and its pullback ``B``."""

    beta: TwoForm
    total_chart: Chart

    def __post_init__(self):
        if not self.total_chart.is_cotangent:
            raise ChartError("magnetic terms need a cotangent-type total chart")
        if self.beta.chart.dim != len(self.total_chart.base_indices):
            raise DimensionError("beta lives on a chart of the wrong dimension")

    @property
    def B(self) -> TwoForm:
        chart = self.total_chart
        return TwoForm(chart, lambda a: embed_basic(self.beta(base_point(chart, a)), chart), "B")

    def lift_bivector(self, a, chart: Chart | None = None) -> Array:
        return vertical_lift(self.beta, a, chart or self.total_chart)


def magnetic_deform(bundle: SymplecticRBundle, m: MagneticTerm,
                    check_points: Array | None = None, cond_limit: float = 1e12) -> SymplecticRBundle:
    """The same bundle with ``Omega - B``; warns if that is singular at any check point."""
    if m.total_chart.dim != bundle.total_chart.dim:
        raise DimensionError("magnetic term is defined on a different total chart")
    deformed = bundle.omega - m.B
    deformed = TwoForm(bundle.total_chart, deformed.func, "Omega-B")
    if check_points is not None:
        for a in np.atleast_2d(check_points):
            W = deformed(a)
            if not (np.all(np.isfinite(W)) and np.linalg.cond(W) < cond_limit):
                warnings.warn(f"Omega - B is singular at {a.tolist()}",
                              SingularDeformationWarning, stacklevel=2)
                break
    return bundle.with_omega(deformed)


def deformed_bracket_residual(bundle: SymplecticRBundle, m: MagneticTerm,
                              F: ScalarField, G: ScalarField, a) -> float:
    """``|{F,G}^B - {F,G} - beta^v(dF, dG)|`` with the left side from inverting ``Omega - B``."""
    deformed = magnetic_deform(bundle, m)
    a = bundle.total_chart.check_point(a)
    left = symplectic_bracket(deformed, F, G, a)
    dF, dG = differential(F, a), differential(G, a)
    right = symplectic_bracket(bundle, F, G, a) + dF @ m.lift_bivector(a) @ dG
    return abs(left - right)


def base_deformed_bracket(bundle: SymplecticRBundle, m: MagneticTerm,
                          f: ScalarField, g: ScalarField, v) -> float:
    """Deformed base bracket: the base bracket plus the lift of ``beta`` restricted to ``dq^i ^ dq^j``."""
    v = bundle.base_chart.check_point(v)
    lifted = m.lift_bivector(v, bundle.base_chart)
    return base_poisson_bracket(bundle, f, g, v) + differential(f, v) @ lifted @ differential(g, v)

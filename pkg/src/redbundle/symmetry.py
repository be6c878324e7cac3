"""Symmetry actions, cotangent-lift momentum maps and reduction checks.

Quotients are never constructed numerically: each model supplies explicit
quotient chart maps and the functions here validate them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .bundle import SymplecticRBundle, poisson_tensor
from .geometry import (
    Array,
    Chart,
    ChartError,
    ScalarField,
    SmoothMap,
    VectorField,
    base_point,
    fd_jacobian,
    jacobian,
)
from .hamiltonian import (
    CosymplecticStructure,
    HamiltonianSection,
    cosymplectic_from_section,
    extended_hamiltonian,
)

GroupElement = Any


class InvalidSampleError(ValueError):
    """A sample that should lie on a momentum level set does not."""


class ReductionMismatchError(ValueError):
    """A reduced system disagrees with the data it was reduced from."""


@dataclass(frozen=True)
class SymmetryAction:
    """Concrete group action on a model, with its lifts to total and base charts.

    ``generators_M`` are vector fields on the configuration chart ``(t, q)``;
    ``generators_A(a)`` returns the rows ``xi_A(a)`` for the basis elements.
    ``jacobian_A(g, a)`` is the analytic Jacobian of ``apply_A(g, .)`` when known.
    """

    name: str
    algebra_dim: int
    generators_M: tuple[VectorField, ...]
    apply_A: Callable[[GroupElement, Array], Array]
    apply_V: Callable[[GroupElement, Array], Array]
    generators_A: Callable[[Array], Array]
    jacobian_A: Callable[[GroupElement, Array], Array] | None = None
    apply_M: Callable[[GroupElement, Array], Array] | None = None

    def action_jacobian(self, g, a) -> Array:
        if self.jacobian_A is not None:
            return np.asarray(self.jacobian_A(g, a), dtype=float)
        return fd_jacobian(lambda y: self.apply_A(g, y), a)


def cotangent_momentum(action: SymmetryAction, chart: Chart, a) -> Array:
    """``J_k(a) = <momentum part of a, xi_M^k(base point of a)>``."""
    if not chart.is_cotangent:
        raise ChartError(f"chart {chart.name!r} is not of cotangent type")
    a = chart.check_point(a)
    x = base_point(chart, a)
    out = np.zeros(action.algebra_dim)
    for k, xi in enumerate(action.generators_M):
        vec = xi(x)
        for j, fj in enumerate(chart.fiber_indices):
            if fj is not None:
                out[k] += a[fj] * vec[j]
            elif vec[j] != 0.0:
                raise ChartError(f"generator has a component along {chart.coordinate_names[chart.base_indices[j]]!r}"
                                 " which has no conjugate momentum in this chart")
    return out


@dataclass(frozen=True)
class MomentumMap:
    """``J`` on the total chart and ``J_V`` on the base, with ``J_V o mu = J``."""

    bundle: SymplecticRBundle
    action: SymmetryAction
    grad: Callable[[Array], Array] | None = None  # rows dJ_k(a)

    def __call__(self, a) -> Array:
        return cotangent_momentum(self.action, self.bundle.total_chart, a)

    def base(self, v) -> Array:
        return self(self.bundle.lift(v, 0.0))

    def differential(self, a) -> Array:
        a = self.bundle.total_chart.check_point(a)
        if self.grad is not None:
            return np.atleast_2d(np.asarray(self.grad(a), dtype=float))
        return np.atleast_2d(fd_jacobian(self, a))

    def base_differential(self, v) -> Array:
        return np.delete(self.differential(self.bundle.lift(v, 0.0)), 1, axis=1)

    def component(self, k: int) -> ScalarField:
        grad = None if self.grad is None else (lambda a: self.differential(a)[k])
        return ScalarField(self.bundle.total_chart, lambda a: self(a)[k], grad, f"J_{k}")


@dataclass(frozen=True)
class ActionReport:
    symplecticity: float
    commutation: float
    basic_form: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.symplecticity, self.commutation, self.basic_form) <= self.tol

    def residuals(self) -> dict[str, float]:
        return {"symplecticity": self.symplecticity, "commutation": self.commutation,
                "basic_form": self.basic_form}


def canonical_action_report(action: SymmetryAction, bundle: SymplecticRBundle,
                            points: Array, group_elements: Sequence[GroupElement],
                            shifts: Sequence[float], tol: float) -> ActionReport:
    """Max residuals of the three canonical-action conditions over the samples.

    Points, group elements and shifts are zipped together.
    """
    zeta = bundle.zeta()
    symp = comm = basic = 0.0
    for a, g, s in zip(points, group_elements, shifts):
        J = action.action_jacobian(g, a)
        pulled = J.T @ bundle.omega(action.apply_A(g, a)) @ J
        symp = max(symp, float(np.max(np.abs(pulled - bundle.omega(a)))))
        lhs = action.apply_A(g, bundle.psi(s, a))
        rhs = bundle.psi(s, action.apply_A(g, a))
        comm = max(comm, float(np.max(np.abs(lhs - rhs))))
        basic = max(basic, float(np.max(np.abs(np.atleast_2d(action.generators_A(a)) @ zeta(a)))))
    return ActionReport(symp, comm, basic, tol)


def time_translation_action(bundle: SymplecticRBundle) -> SymmetryAction:
    """Shift of ``t``: symplectic and commuting with the R-action, but not canonical."""
    dim = bundle.total_chart.dim
    e_t = np.zeros(dim)
    e_t[0] = 1.0
    e_tM = np.zeros(bundle.config_chart.dim)
    e_tM[0] = 1.0
    return SymmetryAction(
        name="time-translation",
        algebra_dim=1,
        generators_M=(VectorField(bundle.config_chart, lambda x: e_tM.copy(), "d/dt"),),
        apply_A=lambda g, a: np.asarray(a, dtype=float) + g * e_t,
        apply_V=lambda g, v: np.asarray(v, dtype=float) + g * e_t[:-1],
        generators_A=lambda a: e_t[None, :].copy(),
        jacobian_A=lambda g, a: np.eye(dim),
    )


def trivial_action(bundle: SymplecticRBundle) -> SymmetryAction:
    dim = bundle.total_chart.dim
    zero_M = np.zeros(bundle.config_chart.dim)
    return SymmetryAction(
        name="trivial",
        algebra_dim=1,
        generators_M=(VectorField(bundle.config_chart, lambda x: zero_M.copy(), "0"),),
        apply_A=lambda g, a: np.asarray(a, dtype=float).copy(),
        apply_V=lambda g, v: np.asarray(v, dtype=float).copy(),
        generators_A=lambda a: np.zeros((1, dim)),
        jacobian_A=lambda g, a: np.eye(dim),
    )


def equivariance_check(action: SymmetryAction, h: HamiltonianSection, points: Array,
                       group_elements: Sequence[GroupElement]) -> float:
    """Max ``|F_h(g a) - F_h(a)|`` over zipped samples."""
    F = extended_hamiltonian(h)
    return max((abs(F(action.apply_A(g, a)) - F(a)) for a, g in zip(points, group_elements)),
               default=0.0)


def momentum_generator_residual(momentum: MomentumMap, a) -> float:
    """``max_k |xi_A^k(a) - H_{J_k}(a)|`` where ``H_{J_k} = Lambda dJ_k``."""
    bundle = momentum.bundle
    a = bundle.total_chart.check_point(a)
    Lam = poisson_tensor(bundle.omega, a)
    ham = momentum.differential(a) @ Lam.T
    return float(np.max(np.abs(np.atleast_2d(momentum.action.generators_A(a)) - ham)))


@dataclass(frozen=True)
class ReductionChart:
    """Explicit quotient charts for reduction at level ``nu``.

    ``quotient_A`` maps level-set points of the full total chart to the reduced
    total chart; ``quotient_V`` does the same for base charts. The reduced
    bundle and section carry the model's closed-form reduced formulas.
    """

    nu: Array
    momentum: MomentumMap
    quotient_A: SmoothMap
    quotient_V: SmoothMap
    reduced_bundle: SymplecticRBundle
    reduced_section: HamiltonianSection

    def level_residual(self, a) -> float:
        return float(np.max(np.abs(self.momentum(a) - self.nu)))

    def level_residual_V(self, v) -> float:
        return float(np.max(np.abs(self.momentum.base(v) - self.nu)))


@dataclass(frozen=True)
class ReductionValidation:
    hamiltonian_residual: float
    pullback_residual: float
    eta_residual: float
    equivariance_residual: float

    def residuals(self) -> dict[str, float]:
        return {"reduced_hamiltonian": self.hamiltonian_residual,
                "reduced_omega_pullback": self.pullback_residual,
                "reduced_eta_pullback": self.eta_residual,
                "reduced_mu_equivariance": self.equivariance_residual}


@dataclass(frozen=True)
class ReducedSystem:
    chart: ReductionChart
    cosymplectic: CosymplecticStructure
    validation: ReductionValidation
    full_section: HamiltonianSection = field(repr=False)


def level_tangent_basis(momentum: MomentumMap, v, rank_tol: float = 1e-10) -> Array:
    """Orthonormal basis (columns) of ``ker dJ_V(v)``, the tangent space of the level set."""
    D = momentum.base_differential(v)
    _, s, Vt = np.linalg.svd(D)
    rank = int(np.sum(s > rank_tol * max(1.0, s.max(initial=0.0))))
    return Vt[rank:].T


def reduce(h: HamiltonianSection, chart: ReductionChart, level_points: Array,
           level_tol: float, fd_tol: float) -> ReducedSystem:
    """Validate the model's reduced system against the full one on level-set samples.

    Checks that ``F_{h_nu} o quotient_A = F_h`` on the level set, that
    ``quotient_V o mu = mu_nu o quotient_A``, and that the reduced
    ``(omega, eta)`` pulls back along ``quotient_V`` to the restriction of the
    full ``(omega_h, eta_h)`` to the level set.
    """
    full = cosymplectic_from_section(h)
    red = cosymplectic_from_section(chart.reduced_section)
    F_full = extended_hamiltonian(h)
    F_red = extended_hamiltonian(chart.reduced_section)
    bundle, rbundle = h.bundle, chart.reduced_bundle

    ham = pull = eta_res = equi = 0.0
    for a in np.atleast_2d(level_points):
        res = chart.level_residual(a)
        if res > level_tol:
            raise InvalidSampleError(f"sample {np.asarray(a).tolist()} is off the level set "
                                     f"(residual {res:.3e} > {level_tol:.1e})")
        qa = chart.quotient_A(a)
        ham = max(ham, abs(F_red(qa) - F_full(a)))
        v = bundle.mu(a)
        equi = max(equi, float(np.max(np.abs(chart.quotient_V(v) - rbundle.mu(qa)))))

        T = level_tangent_basis(chart.momentum, v)
        Jq = jacobian(chart.quotient_V, v) @ T
        w = chart.quotient_V(v)
        pull = max(pull, float(np.max(np.abs(T.T @ full.omega(v) @ T - Jq.T @ red.omega(w) @ Jq))))
        eta_res = max(eta_res, float(np.max(np.abs(full.eta(v) @ T - red.eta(w) @ Jq))))

    validation = ReductionValidation(ham, pull, eta_res, equi)
    worst = max(validation.residuals().items(), key=lambda kv: kv[1])
    if worst[1] > fd_tol:
        raise ReductionMismatchError(f"{worst[0]} residual {worst[1]:.3e} exceeds {fd_tol:.1e}")
    return ReducedSystem(chart, red, validation, h)


@dataclass(frozen=True)
class Trajectory:
    times: Array
    states: Array
    names: tuple[str, ...]

    def __post_init__(self):
        if self.states.ndim != 2 or self.states.shape[1] != len(self.names):
            raise ValueError("states must be (steps, len(names))")
        if self.states.shape[0] != self.times.shape[0]:
            raise ValueError("times and states differ in length")


@dataclass(frozen=True)
class ConsistencyResult:
    discrepancy: float
    level_drift: float
    drift_flagged: bool


def reduced_dynamics_consistency(full_states: Array, project: Callable[[Array], Array],
                                 reduced_states: Array,
                                 level_residual: Callable[[Array], float] | None = None,
                                 drift_tol: float = 1e-6) -> ConsistencyResult:
    """Sup over the shared grid of ``|project(full) - reduced|_inf``."""
    full_states, reduced_states = np.atleast_2d(full_states), np.atleast_2d(reduced_states)
    if full_states.shape[0] != reduced_states.shape[0]:
        raise ValueError("full and reduced trajectories are on different grids")
    projected = np.array([project(y) for y in full_states])
    disc = float(np.max(np.abs(projected - reduced_states)))
    drift = 0.0
    if level_residual is not None:
        drift = max(level_residual(y) for y in full_states)
    return ConsistencyResult(disc, drift, drift > drift_tol)


def momentum_conservation(full_states: Array, J: Callable[[Array], Array]) -> float:
    """Sup over the grid of ``|J(y(t)) - J(y(0))|_inf``."""
    full_states = np.atleast_2d(full_states)
    J0 = np.atleast_1d(J(full_states[0]))
    return max(float(np.max(np.abs(np.atleast_1d(J(y)) - J0))) for y in full_states)

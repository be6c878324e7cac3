"""Integrate a model's full and reduced dynamics on a shared time grid."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .integrators import integrate, step_count
from .symmetry import (
    ConsistencyResult,
    Trajectory,
    momentum_conservation,
    reduced_dynamics_consistency,
)

log = logging.getLogger(__name__)


def _tracked(post_step, drift, label):
    """Wrap a constraint projection so the largest pre-projection drift gets logged."""
    if post_step is None or drift is None:
        return post_step, lambda: None
    worst = [0.0]

    def wrapped(y):
        worst[0] = max(worst[0], drift(y))
        return post_step(y)

    def report():
        log.info("%s: max constraint drift before projection %.3e", label, worst[0])

    return wrapped, report


def simulate(model, y0, t0: float, t1: float, dt: float, method: str = "rk4") -> Trajectory:
    steps = step_count(t0, t1, dt)
    y0 = np.array(y0, dtype=float)
    y0[0] = t0
    post, report = _tracked(model.post_step, getattr(model, "constraint_drift", None), "full")
    states = integrate(model.vector_field, y0, dt, steps, method, post)
    report()
    return Trajectory(states[:, 0].copy(), states, model.state_names)


def simulate_reduced(model, nu: float, z0, t0: float, t1: float, dt: float,
                     method: str = "rk4") -> Trajectory:
    steps = step_count(t0, t1, dt)
    z0 = np.array(z0, dtype=float)
    z0[0] = t0
    post, report = _tracked(model.reduced_post_step(nu),
                            getattr(model, "reduced_constraint_drift", None), "reduced")
    states = integrate(model.reduced_vector_field(nu), z0, dt, steps, method, post)
    report()
    return Trajectory(states[:, 0].copy(), states, model.reduced_state_names)


@dataclass(frozen=True)
class ReductionRun:
    full: Trajectory
    projected: Trajectory
    reduced: Trajectory
    consistency: ConsistencyResult
    momentum_drift: float


def run_reduction(model, nu: float, y0, t0: float, t1: float, dt: float,
                  method: str = "rk4", drift_tol: float = 1e-6) -> ReductionRun:
    """Integrate the full system from ``y0`` and the reduced one from its projection."""
    full = simulate(model, y0, t0, t1, dt, method)
    reduced = simulate_reduced(model, nu, model.project_state(full.states[0]), t0, t1, dt, method)
    projected = np.array([model.project_state(y) for y in full.states])
    consistency = reduced_dynamics_consistency(
        full.states, model.project_state, reduced.states,
        lambda y: model.level_residual_state(y, nu), drift_tol)
    drift = momentum_conservation(full.states, model.momentum_of_state)
    return ReductionRun(full, Trajectory(full.times, projected, model.reduced_state_names),
                        reduced, consistency, drift)

"""Fixed-step integrators for autonomous ODEs ``y' = f(y)`` (time is a state coordinate)."""

from __future__ import annotations

from typing import Callable

import numpy as np

Field = Callable[[np.ndarray], np.ndarray]
PostStep = Callable[[np.ndarray], np.ndarray]


class ConvergenceError(RuntimeError):
    pass


def step_count(t0: float, t1: float, dt: float) -> int:
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not t1 > t0:
        raise ValueError(f"t1 must exceed t0, got t0={t0}, t1={t1}")
    return max(1, int(round((t1 - t0) / dt)))


def rk4_step(f: Field, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def midpoint_step(f: Field, y: np.ndarray, dt: float, tol: float = 1e-12,
                  max_iter: int = 50) -> np.ndarray:
    """Implicit midpoint ``y1 = y + dt f((y + y1) / 2)`` by fixed-point iteration."""
    y1 = y + dt * f(y)
    for _ in range(max_iter):
        nxt = y + dt * f(0.5 * (y + y1))
        if np.max(np.abs(nxt - y1)) <= tol * max(1.0, np.max(np.abs(nxt))):
            return nxt
        y1 = nxt
    raise ConvergenceError(f"implicit midpoint did not converge in {max_iter} iterations")


STEPPERS = {"rk4": rk4_step, "midpoint": midpoint_step}


def integrate(f: Field, y0, dt: float, steps: int, method: str = "rk4",
              post_step: PostStep | None = None) -> np.ndarray:
    """Return the ``(steps + 1, dim)`` array of states, starting with ``y0``."""
    try:
        stepper = STEPPERS[method]
    except KeyError:
        raise ValueError(f"unknown integrator {method!r}; choose from {sorted(STEPPERS)}") from None
    y = np.array(y0, dtype=float)
    out = np.empty((steps + 1, y.size))
    out[0] = y
    for k in range(steps):
        y = stepper(f, y, dt)
        if post_step is not None:
            y = post_step(y)
        out[k + 1] = y
    return out

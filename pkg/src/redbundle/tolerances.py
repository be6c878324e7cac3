"""Numerical tolerances and finite-difference step sizes.

All defaults can be overridden per run (config keys ``tol_fd``, ``tol_exact``,
``tol_closed``) and globally scaled through the ``REDBUNDLE_TOL_OVERRIDE``
environment variable, which holds a positive multiplier applied to every
tolerance (never to the step sizes).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_SCALE = "REDBUNDLE_TOL_OVERRIDE"

# relative step for first derivatives, and for the second-order closedness stencil
H_FD = 1e-6
H_CLOSED = 1e-4


@dataclass(frozen=True)
class Tolerances:
    fd: float = 1e-5
    exact: float = 1e-10
    closed: float = 1e-4
    antisym: float = 1e-12

    def scaled(self, factor: float) -> "Tolerances":
        if not factor > 0:
            raise ValueError(f"tolerance scale must be positive, got {factor!r}")
        return Tolerances(self.fd * factor, self.exact * factor,
                          self.closed * factor, self.antisym * factor)

    def with_overrides(self, **kw: float | None) -> "Tolerances":
        return replace(self, **{k: float(v) for k, v in kw.items() if v is not None})


def env_scale() -> float:
    raw = os.environ.get(ENV_SCALE, "").strip()
    if not raw:
        return 1.0
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_SCALE} must be a number, got {raw!r}") from exc
    if not value > 0:
        raise ValueError(f"{ENV_SCALE} must be positive, got {raw!r}")
    return value


def default_tolerances() -> Tolerances:
    return Tolerances().scaled(env_scale())

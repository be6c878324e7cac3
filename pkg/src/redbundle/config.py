"""Run configuration: a flat ``key = value`` text format plus command-line overrides.

Lines are ``key = value``; blank lines and ``#`` comments are ignored.
Unknown keys are errors.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .tolerances import Tolerances, default_tolerances


class ConfigError(ValueError):
    pass


RUN_KEYS = {"model", "integrator", "t0", "t1", "dt", "nu", "seed", "samples",
            "tol_fd", "tol_exact", "tol_closed", "omega_perturbation"}

MODEL_KEYS = {
    "oscillator": {"sigma", "F", "r_min", "box_r_low", "box_r_high", "box_t_high", "box_momentum"},
    "heavytop": {"inertia", "gamma1", "gamma2", "gamma3", "box_t_high", "box_momentum",
                 "min_sin_theta"},
}

INITIAL_KEYS = {
    "oscillator": {"q1", "q2", "p1", "p2", "p"},
    "heavytop": {"qw", "qx", "qy", "qz", "Pi1", "Pi2", "Pi3", "p"},
}

INTEGRATORS = ("rk4", "midpoint")


def parse_key_values(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _number(raw, key: str, kind=float):
    try:
        value = kind(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be {'an integer' if kind is int else 'a number'}, got {raw!r}") from exc
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {raw!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    model: str = "oscillator"
    integrator: str = "rk4"
    t0: float = 0.0
    t1: float = 10.0
    dt: float = 1e-3
    nu: float | None = None
    seed: int = 0
    samples: int = 100
    tolerances: Tolerances = field(default_factory=default_tolerances)
    model_params: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    omega_perturbation: float = 0.0

    def __post_init__(self):
        if self.model not in MODEL_KEYS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {sorted(MODEL_KEYS)}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"unknown integrator {self.integrator!r}; choose from {list(INTEGRATORS)}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t1 > self.t0:
            raise ConfigError(f"t1 must exceed t0, got t0={self.t0}, t1={self.t1}")
        if self.samples < 1:
            raise ConfigError(f"samples must be at least 1, got {self.samples}")

    def level(self) -> float:
        """Reduction level, defaulting per model."""
        if self.nu is not None:
            return self.nu
        return 1.0 if self.model == "oscillator" else 0.0

    def canonical(self) -> dict:
        d = asdict(self)
        d["model_params"] = dict(sorted(self.model_params.items()))
        d["initial"] = dict(sorted(self.initial.items()))
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def build_config(values: dict[str, str], overrides: dict | None = None) -> RunConfig:
    """Combine file values with command-line overrides (which win) into a validated config."""
    merged = {k: v for k, v in values.items()}
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v
    model = str(merged.pop("model", "oscillator"))
    if model not in MODEL_KEYS:
        raise ConfigError(f"unknown model {model!r}; choose from {sorted(MODEL_KEYS)}")

    allowed = RUN_KEYS | MODEL_KEYS[model] | INITIAL_KEYS[model]
    unknown = sorted(set(merged) - allowed)
    if unknown:
        raise ConfigError(f"unknown config keys for model {model!r}: {unknown}")

    try:
        tol = default_tolerances()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    overrides = {}
    for name in ("fd", "exact", "closed"):
        key = f"tol_{name}"
        if key in merged:
            overrides[name] = _number(merged.pop(key), key)
            if not overrides[name] > 0:
                raise ConfigError(f"{key} must be positive, got {overrides[name]}")
    tol = tol.with_overrides(**overrides)
    run = {}
    for key, kind in (("t0", float), ("t1", float), ("dt", float), ("seed", int),
                      ("samples", int), ("omega_perturbation", float)):
        if key in merged:
            run[key] = _number(merged.pop(key), key, kind)
    if "nu" in merged:
        run["nu"] = _number(merged.pop("nu"), "nu")
    if "integrator" in merged:
        run["integrator"] = str(merged.pop("integrator"))
    initial = {k: _number(merged.pop(k), k) for k in sorted(INITIAL_KEYS[model] & set(merged))}
    params = {k: str(v) for k, v in merged.items()}
    return RunConfig(model=model, tolerances=tol, model_params=params, initial=initial, **run)


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    values: dict[str, str] = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {str(p)!r}: {exc.strerror}") from exc
        values = parse_key_values(text, str(p))
    return build_config(values, overrides)

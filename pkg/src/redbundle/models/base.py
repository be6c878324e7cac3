"""Shared helpers for model construction."""

from __future__ import annotations

import math


class ModelConfigError(ValueError):
    pass


def take_float(params: dict, key: str) -> float:
    raw = params.pop(key)
    try:
        value = float(raw)
    except (TypeError, ValueError) as exc:
        raise ModelConfigError(f"{key} must be a number, got {raw!r}") from exc
    if not math.isfinite(value):
        raise ModelConfigError(f"{key} must be finite, got {raw!r}")
    return value

from .base import ModelConfigError
from .heavy_top import HeavyTopModel
from .oscillator import OscillatorModel

MODELS = {"oscillator": OscillatorModel, "heavytop": HeavyTopModel}


def build_model(name: str, params: dict | None = None):
    try:
        cls = MODELS[name]
    except KeyError:
        raise ModelConfigError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    return cls.from_params(params or {})


__all__ = ["HeavyTopModel", "MODELS", "ModelConfigError", "OscillatorModel", "build_model"]

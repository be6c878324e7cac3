"""Scalar coefficient functions of time, parsed from short text specs.

Accepted forms (terms may be joined with ``+``)::

    const:c              c
    poly:c0,c1,...       c0 + c1 t + c2 t^2 + ...
    sin:a,w,phi          a sin(w t + phi)

e.g. ``const:1+sin:1,1,0`` is ``1 + sin t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class CoefficientParseError(ValueError):
    pass


@dataclass(frozen=True)
class _Term:
    kind: str
    params: tuple[float, ...]

    def value(self, t: float) -> float:
        if self.kind == "const":
            return self.params[0]
        if self.kind == "poly":
            acc = 0.0
            for c in reversed(self.params):
                acc = acc * t + c
            return acc
        a, w, phi = self.params
        return a * math.sin(w * t + phi)

    def deriv(self, t: float) -> float:
        if self.kind == "const":
            return 0.0
        if self.kind == "poly":
            acc = 0.0
            for k in range(len(self.params) - 1, 0, -1):
                acc = acc * t + k * self.params[k]
            return acc
        a, w, phi = self.params
        return a * w * math.cos(w * t + phi)


_ARITY = {"const": (1, 1), "poly": (1, None), "sin": (3, 3)}


@dataclass(frozen=True)
class Coefficient:
    """A smooth function of t with exact first derivative."""

    spec: str
    terms: tuple[_Term, ...]

    def __call__(self, t: float) -> float:
        return sum(term.value(t) for term in self.terms)

    def deriv(self, t: float) -> float:
        return sum(term.deriv(t) for term in self.terms)

    @property
    def is_zero(self) -> bool:
        # sin terms vanish iff the amplitude does; other kinds iff every coefficient does
        return all(
            term.params[0] == 0.0 if term.kind == "sin" else not any(term.params)
            for term in self.terms)

    def __str__(self) -> str:
        return self.spec


def parse_coefficient(spec: str) -> Coefficient:
    text = str(spec).strip()
    if not text:
        raise CoefficientParseError("empty coefficient spec")
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        kind, sep, rest = chunk.partition(":")
        kind = kind.strip().lower()
        if not sep or kind not in _ARITY:
            raise CoefficientParseError(
                f"cannot parse {chunk!r}: expected const:c, poly:c0,c1,... or sin:a,w,phi")
        try:
            params = tuple(float(v) for v in rest.split(","))
        except ValueError as exc:
            raise CoefficientParseError(f"non-numeric parameter in {chunk!r}") from exc
        lo, hi = _ARITY[kind]
        if len(params) < lo or (hi is not None and len(params) > hi):
            raise CoefficientParseError(f"wrong number of parameters in {chunk!r}")
        if not all(math.isfinite(p) for p in params):
            raise CoefficientParseError(f"non-finite parameter in {chunk!r}")
        terms.append(_Term(kind, params))
    return Coefficient(text, tuple(terms))


def constant(c: float) -> Coefficient:
    return parse_coefficient(f"const:{float(c)!r}")

"""Chart-level differential geometry kernel.

Everything here is pointwise: a field is a function of a coordinate vector,
2-forms and bivectors evaluate to antisymmetric matrices, and derivatives are
either supplied analytically or taken by central finite differences.

Index conventions: a 2-form ``w`` evaluated at ``x`` is the matrix
``W[i, j] = w(e_i, e_j)``, so ``w(u, v) = u @ W @ v`` and the interior product
``i_X w`` is the covector ``X @ W`` (contraction on the first slot).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .tolerances import H_CLOSED, H_FD

Array = np.ndarray


class EvaluationError(ValueError):
    """A field produced a non-finite value near the requested point."""


class DimensionError(ValueError):
    pass


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """A named coordinate system.

    ``base_indices`` marks the chart as cotangent type: those coordinates are
    the point of the underlying configuration manifold (in its own chart
    order), and ``fiber_indices[k]`` is the conjugate momentum coordinate of
    ``base_indices[k]``, or ``None`` when that base direction has no fiber
    partner in this chart.
    """

    name: str
    coordinate_names: tuple[str, ...]
    base_indices: tuple[int, ...] | None = None
    fiber_indices: tuple[int | None, ...] | None = None

    def __post_init__(self):
        names = tuple(self.coordinate_names)
        object.__setattr__(self, "coordinate_names", names)
        if len(names) < 1:
            raise ChartError(f"chart {self.name!r} needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ChartError(f"chart {self.name!r} has duplicate coordinate names")
        if (self.base_indices is None) != (self.fiber_indices is None):
            raise ChartError("base_indices and fiber_indices go together")
        if self.base_indices is not None:
            if len(self.base_indices) != len(self.fiber_indices):
                raise ChartError("base_indices and fiber_indices differ in length")
            used = [i for i in self.base_indices] + [i for i in self.fiber_indices if i is not None]
            if len(set(used)) != len(used) or any(not 0 <= i < len(names) for i in used):
                raise ChartError(f"invalid cotangent structure on chart {self.name!r}")

    @property
    def dim(self) -> int:
        return len(self.coordinate_names)

    @property
    def is_cotangent(self) -> bool:
        return self.base_indices is not None

    def index(self, name: str) -> int:
        return self.coordinate_names.index(name)

    def check_point(self, x) -> Array:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionError(
                f"point of shape {x.shape} given to chart {self.name!r} of dim {self.dim}")
        return x


def _fd_steps(x: Array, h: float) -> Array:
    return h * np.maximum(1.0, np.abs(x))


def _finite(value, what: str, x: Array, coord: int | None = None, chart: Chart | None = None):
    if not np.all(np.isfinite(value)):
        where = ""
        if coord is not None:
            label = chart.coordinate_names[coord] if chart is not None else str(coord)
            where = f" while differentiating along {label!r}"
        raise EvaluationError(f"{what} is not finite near {x.tolist()}{where}")
    return value


@dataclass(frozen=True)
class ScalarField:
    chart: Chart
    func: Callable[[Array], float]
    grad: Callable[[Array], Array] | None = None
    name: str = "f"

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    @property
    def has_gradient(self) -> bool:
        return self.grad is not None

    def without_gradient(self) -> "ScalarField":
        return ScalarField(self.chart, self.func, None, self.name)


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    func: Callable[[Array], Array]
    name: str = "X"

    def __call__(self, x) -> Array:
        out = np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)
        if out.shape != (self.chart.dim,):
            raise DimensionError(f"{self.name} returned shape {out.shape}, expected ({self.chart.dim},)")
        return out


@dataclass(frozen=True)
class OneForm(VectorField):
    name: str = "alpha"


@dataclass(frozen=True)
class TwoForm:
    chart: Chart
    func: Callable[[Array], Array]
    name: str = "omega"

    def __call__(self, x) -> Array:
        out = np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)
        d = self.chart.dim
        if out.shape != (d, d):
            raise DimensionError(f"{self.name} returned shape {out.shape}, expected ({d}, {d})")
        return out

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        if other.chart.dim != self.chart.dim:
            raise DimensionError("cannot subtract 2-forms on charts of different dimension")
        return TwoForm(self.chart, lambda x: self(x) - other(x), f"{self.name}-{other.name}")


@dataclass(frozen=True)
class Bivector(TwoForm):
    name: str = "Lambda"


def constant_two_form(chart: Chart, matrix) -> TwoForm:
    m = np.array(matrix, dtype=float)
    m.setflags(write=False)
    return TwoForm(chart, lambda x: m.copy())


def antisymmetry_residual(matrix: Array) -> float:
    return float(np.max(np.abs(matrix + matrix.T))) if matrix.size else 0.0


@dataclass(frozen=True)
class SmoothMap:
    """A map between charts, with an optional analytic Jacobian."""

    source: Chart
    target: Chart
    func: Callable[[Array], Array]
    jac: Callable[[Array], Array] | None = None

    def __call__(self, x) -> Array:
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def compose(self, inner: "SmoothMap") -> "SmoothMap":
        """``self ∘ inner``."""
        jac = None
        if self.jac is not None and inner.jac is not None:
            jac = lambda x: self.jac(inner(x)) @ inner.jac(x)
        return SmoothMap(inner.source, self.target, lambda x: self(inner(x)), jac)


def differential(f: ScalarField, x) -> Array:
    """Covector ``df(x)``: analytic when available, else central differences."""
    x = f.chart.check_point(x)
    if f.grad is not None:
        g = np.asarray(f.grad(x), dtype=float)
        if g.shape != (f.chart.dim,):
            raise DimensionError(f"gradient of {f.name} has shape {g.shape}")
        return _finite(g, f"gradient of {f.name}", x)
    steps = _fd_steps(x, H_FD)
    out = np.empty_like(x)
    for i, h in enumerate(steps):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        fp, fm = f(xp), f(xm)
        _finite(np.array([fp, fm]), f.name, x, i, f.chart)
        out[i] = (fp - fm) / (2.0 * h)
    return out


def fd_jacobian(func: Callable[[Array], Array], x: Array, h: float = H_FD) -> Array:
    """Central-difference Jacobian ``J[a, i] = d func_a / d x_i``."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i, step in enumerate(_fd_steps(x, h)):
        xp, xm = x.copy(), x.copy()
        xp[i] += step
        xm[i] -= step
        fp = np.asarray(func(xp), dtype=float)
        fm = np.asarray(func(xm), dtype=float)
        _finite(np.concatenate([np.ravel(fp), np.ravel(fm)]), "map", x, i)
        cols.append((fp - fm) / (2.0 * step))
    return np.stack(cols, axis=-1)


def jacobian(phi: SmoothMap, x) -> Array:
    x = phi.source.check_point(x)
    if phi.jac is not None:
        J = np.asarray(phi.jac(x), dtype=float)
    else:
        J = fd_jacobian(phi.func, x)
    if J.shape != (phi.target.dim, phi.source.dim):
        raise DimensionError(
            f"Jacobian has shape {J.shape}, expected ({phi.target.dim}, {phi.source.dim})")
    return J


def closedness_residual(omega: TwoForm, x, h: float = H_CLOSED) -> float:
    """Max over (i, j, k) of |d_i w_jk + d_j w_ki + d_k w_ij|, by central differences."""
    x = omega.chart.check_point(x)
    # D[i, j, k] = d_i w_jk
    D = fd_jacobian(lambda y: omega(y), x, h).transpose(2, 0, 1)
    cyclic = D + D.transpose(1, 2, 0) + D.transpose(2, 0, 1)
    return float(np.max(np.abs(cyclic)))


def one_form_closedness_residual(alpha: OneForm, x, h: float = H_CLOSED) -> float:
    """Max over (i, j) of |d_i a_j - d_j a_i|."""
    x = alpha.chart.check_point(x)
    D = fd_jacobian(lambda y: alpha(y), x, h)  # D[j, i] = d_i a_j
    return float(np.max(np.abs(D - D.T)))


def pullback_two_form(phi: SmoothMap, omega: TwoForm, x) -> Array:
    """``(phi^* omega)(x) = J^T omega(phi(x)) J``."""
    if omega.chart.dim != phi.target.dim:
        raise DimensionError("2-form chart does not match the map's target")
    x = phi.source.check_point(x)
    J = jacobian(phi, x)
    return J.T @ omega(phi(x)) @ J


def pullback_one_form(phi: SmoothMap, alpha: OneForm, x) -> Array:
    if alpha.chart.dim != phi.target.dim:
        raise DimensionError("1-form chart does not match the map's target")
    x = phi.source.check_point(x)
    return jacobian(phi, x).T @ alpha(phi(x))


def interior_product(X, omega: TwoForm, x) -> Array:
    """Covector ``v -> omega(x)(X(x), v)``; ``X`` may be a field or a vector at x."""
    x = omega.chart.check_point(x)
    v = X(x) if callable(X) else np.asarray(X, dtype=float)
    if v.shape != (omega.chart.dim,):
        raise DimensionError(f"vector of shape {v.shape} on chart of dim {omega.chart.dim}")
    return v @ omega(x)


def embed_basic(beta_value: Array, chart: Chart) -> Array:
    """Place a form on the configuration manifold at the base slots of ``chart``."""
    if not chart.is_cotangent:
        raise ChartError(f"chart {chart.name!r} is not of cotangent type")
    idx = np.asarray(chart.base_indices)
    out = np.zeros((chart.dim, chart.dim))
    out[np.ix_(idx, idx)] = beta_value
    return out


def base_point(chart: Chart, x) -> Array:
    if not chart.is_cotangent:
        raise ChartError(f"chart {chart.name!r} is not of cotangent type")
    return np.asarray(x, dtype=float)[list(chart.base_indices)]


def vertical_lift(beta: TwoForm, x, chart: Chart) -> Array:
    """Fiber-supported bivector with ``beta_ij(base point)`` at the momentum slots.

    Base directions without a fiber partner in ``chart`` are dropped, which is
    exactly the restriction of ``beta`` to the directions that do have one.
    """
    if not chart.is_cotangent:
        raise ChartError(f"chart {chart.name!r} is not of cotangent type")
    x = chart.check_point(x)
    b = beta(base_point(chart, x))
    out = np.zeros((chart.dim, chart.dim))
    for a, fa in enumerate(chart.fiber_indices):
        if fa is None:
            continue
        for c, fc in enumerate(chart.fiber_indices):
            if fc is not None:
                out[fa, fc] = b[a, c]
    return out


def polynomial_field(chart: Chart, terms: Sequence[tuple[float, Sequence[int]]],
                     name: str = "poly") -> ScalarField:
    """Scalar polynomial ``sum c * prod x_i**e_i`` with an exact gradient."""
    coefs = np.array([c for c, _ in terms], dtype=float)
    exps = np.array([list(e) for _, e in terms], dtype=int).reshape(len(terms), chart.dim)

    def value(x):
        return float(coefs @ np.prod(x[None, :] ** exps, axis=1))

    def grad(x):
        g = np.zeros(chart.dim)
        for i in range(chart.dim):
            e = exps.copy()
            mask = e[:, i] > 0
            if not mask.any():
                continue
            factor = e[mask, i].astype(float)
            e = e[mask]
            e[:, i] -= 1
            g[i] = float((coefs[mask] * factor) @ np.prod(x[None, :] ** e, axis=1))
        return g

    return ScalarField(chart, value, grad, name)


def coordinate_function(chart: Chart, name: str) -> ScalarField:
    i = chart.index(name)
    e = np.zeros(chart.dim)
    e[i] = 1.0
    return ScalarField(chart, lambda x: x[i], lambda x: e.copy(), name)


@dataclass(frozen=True)
class Box:
    """Coordinate rectangle used for seeded uniform sampling."""

    chart: Chart
    low: tuple[float, ...]
    high: tuple[float, ...]

    def sample(self, rng: np.random.Generator, count: int) -> Array:
        lo, hi = np.asarray(self.low, float), np.asarray(self.high, float)
        return lo + (hi - lo) * rng.random((count, self.chart.dim))

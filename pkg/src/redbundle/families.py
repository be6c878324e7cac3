"""Fixed, seeded families of polynomial test functions."""

from __future__ import annotations

import numpy as np

from .geometry import Chart, ScalarField, TwoForm, polynomial_field

FAMILY_SEED = 20240601
FAMILY_SIZE = 20


def polynomial_family(chart: Chart, count: int = FAMILY_SIZE, seed: int = FAMILY_SEED,
                      max_degree: int = 3, terms: int = 4) -> list[ScalarField]:
    """``count`` polynomials on ``chart``, each a sum of ``terms`` monomials of total degree <= ``max_degree``.

    The first ``chart.dim`` members are the coordinate functions, so the
    family always contains the brackets that define the structure.
    """
    rng = np.random.default_rng(seed)
    d = chart.dim
    family = []
    for i in range(count):
        if i < d:
            e = [0] * d
            e[i] = 1
            family.append(polynomial_field(chart, [(1.0, e)], f"f{i}"))
            continue
        monos = []
        for _ in range(terms):
            deg = int(rng.integers(1, max_degree + 1))
            e = np.zeros(d, dtype=int)
            for k in rng.integers(0, d, size=deg):
                e[k] += 1
            monos.append((float(rng.uniform(-1, 1)), e.tolist()))
        family.append(polynomial_field(chart, monos, f"f{i}"))
    return family


def polynomial_two_form(chart: Chart, seed: int = FAMILY_SEED + 1, scale: float = 1.0) -> TwoForm:
    """A closed polynomial 2-form ``d(alpha)`` with ``alpha`` a random quadratic 1-form."""
    rng = np.random.default_rng(seed)
    d = chart.dim
    # alpha_j(x) = sum_k c[j,k] x_k + sum_{k<=l} e[j,k,l] x_k x_l
    c = scale * rng.uniform(-1, 1, size=(d, d))
    e = scale * rng.uniform(-1, 1, size=(d, d, d))
    e = 0.5 * (e + e.transpose(0, 2, 1))

    def beta(x):
        # D[j, i] = d_i alpha_j ; beta_ij = d_i alpha_j - d_j alpha_i
        D = c + 2.0 * np.einsum("jil,l->ji", e, x)
        return D.T - D

    return TwoForm(chart, beta, "d(alpha)")

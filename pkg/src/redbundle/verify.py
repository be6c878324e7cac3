"""Verification suites: sampled numerical checks of the structural identities.

Every check records the residual, its tolerance, the comparison used and a
short statement of the identity being tested. Sampling uses a per-suite
seeded generator so a suite's numbers do not depend on which other suites run.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bundle import (
    MagneticTerm,
    SymplecticRBundle,
    base_deformed_bracket,
    deformed_bracket_residual,
    magnetic_deform,
    poisson_tensor,
    symplectic_bracket,
)
from .config import RunConfig
from .families import polynomial_family, polynomial_two_form
from .geometry import (
    ScalarField,
    TwoForm,
    antisymmetry_residual,
    closedness_residual,
    differential,
    fd_jacobian,
)
from .hamiltonian import (
    HamiltonianSection,
    bracket_matrices,
    cosymplectic_from_section,
    cosymplectic_ham_field,
    extended_hamiltonian,
    hamiltonian_vector_field,
    horizontal_projector,
    omega_reconstruction_residual,
    projection_consistency,
    reeb_field,
)
from .models import build_model
from .models.heavy_top import HeavyTopModel, area_form, sphere_frame
from .models.oscillator import OscillatorModel
from .simulation import run_reduction, simulate
from .symmetry import (
    canonical_action_report,
    equivariance_check,
    momentum_conservation,
    momentum_generator_residual,
    reduce,
    time_translation_action,
)

SUITES = ("bracket", "cosymplectic", "momentum", "reduction", "magnetic")
DRIFT_TOL = 1e-6
CONSISTENCY_TOL = 1e-5
DET_FLOOR = 1e-8
NEGATIVE_CONTROL_FLOOR = 0.99
DEFAULT_MAGNETIC_NU = 0.5


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    identity: str
    relation: str = "<="

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "tolerance", float(self.tolerance))

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.relation == "<=":
            return self.value <= self.tolerance
        return self.value >= self.tolerance

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "relation": self.relation, "passed": self.passed, "identity": self.identity}


@dataclass
class VerificationReport:
    model: str
    suite: str
    seed: int
    config_hash: str
    samples: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"model": self.model, "suite": self.suite, "seed": self.seed,
                "config_hash": self.config_hash, "samples": self.samples,
                "passed": self.passed, "checks": [c.as_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def _max(values) -> float:
    return float(max(values, default=0.0))


class _Context:
    def __init__(self, config: RunConfig):
        self.config = config
        self.tol = config.tolerances
        self.model = build_model(config.model, config.model_params)
        bundle = self.model.bundle
        if config.omega_perturbation:
            bundle = _perturbed(bundle, config.omega_perturbation)
        self.bundle = bundle
        self.section = HamiltonianSection(bundle, self.model.section.H)
        self.n = config.samples

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, SUITES.index(suite)])

    def base_points(self, rng) -> np.ndarray:
        return np.array([self.bundle.mu(a) for a in self.model.sample_points(rng, self.n)])


def _perturbed(bundle: SymplecticRBundle, eps: float) -> SymplecticRBundle:
    """Negative control: add a symmetric matrix to Omega."""
    d = bundle.total_chart.dim
    S = np.zeros((d, d))
    S[0, 2] = S[2, 0] = 1.0
    S[1, 1] = 1.0
    base = bundle.omega
    return bundle.with_omega(TwoForm(bundle.total_chart, lambda a: base(a) + eps * S, "Omega+perturbation"))


def _antisymmetry(ctx: _Context, rng) -> list[Check]:
    pts = ctx.model.sample_points(rng, ctx.n)
    return [Check("omega_antisymmetry", _max(antisymmetry_residual(ctx.bundle.omega(a)) for a in pts),
                  ctx.tol.antisym, "Omega + Omega^T = 0")]


# bracket suite

def _product(f: ScalarField, g: ScalarField) -> ScalarField:
    return ScalarField(f.chart, lambda x: f(x) * g(x),
                       lambda x: f(x) * differential(g, x) + g(x) * differential(f, x),
                       f"{f.name}*{g.name}")


def bracket_suite(ctx: _Context) -> list[Check]:
    rng = ctx.rng("bracket")
    b, h, tol = ctx.bundle, ctx.section, ctx.tol
    V = b.base_chart
    fam = polynomial_family(V)
    fam_fd = [f.without_gradient() for f in fam]
    h_fd = HamiltonianSection(b, h.H.without_gradient())
    c, c_fd = cosymplectic_from_section(h), cosymplectic_from_section(h_fd)
    pts = ctx.model.sample_points(rng, ctx.n)

    poisson_map = lift_indep = antisym = eq = eq_fd = leib = 0.0
    for a in pts:
        v = b.mu(a)
        D = np.insert(np.array([differential(f, v) for f in fam]), 1, 0.0, axis=1)
        upstairs = D @ poisson_tensor(b.omega, a) @ D.T
        induced, cosym = bracket_matrices(h, c, fam, v)
        poisson_map = max(poisson_map, float(np.max(np.abs(upstairs - induced))))
        lifted7 = D @ poisson_tensor(b.omega, b.lift(v, 7.0)) @ D.T
        lift_indep = max(lift_indep, float(np.max(np.abs(lifted7 - induced))))
        antisym = max(antisym, antisymmetry_residual(induced))
        eq = max(eq, float(np.max(np.abs(induced - cosym))))
        induced_fd, cosym_fd = bracket_matrices(h_fd, c_fd, fam_fd, v)
        eq_fd = max(eq_fd, float(np.max(np.abs(induced_fd - cosym_fd))))

    def base_bracket(f, g, v):
        return symplectic_bracket(b, b.lift_function(f), b.lift_function(g), b.lift(v))

    triples = [(fam[i], fam[j], fam[k]) for i, j, k in rng.integers(0, len(fam), size=(5, 3))]
    jac = 0.0
    for a in pts[: min(len(pts), 10)]:
        v = b.mu(a)
        for f, g, k in triples:
            gk = _product(g, k)
            leib = max(leib, abs(base_bracket(f, gk, v) - g(v) * base_bracket(f, k, v)
                                 - k(v) * base_bracket(f, g, v)))
            br = lambda x, y: ScalarField(V, lambda z: base_bracket(x, y, z), None, "br")
            jac = max(jac, abs(base_bracket(f, br(g, k), v) + base_bracket(g, br(k, f), v)
                               + base_bracket(k, br(f, g), v)))
    return [
        Check("poisson_map", poisson_map, tol.exact, "{f o mu, g o mu}_A = {f, g}_V o mu"),
        Check("base_bracket_lift_independence", lift_indep, tol.exact,
              "{f, g}_V computed over p = 0 and p = 7 agree"),
        Check("base_bracket_antisymmetry", antisym, tol.exact, "{f, g}_V = -{g, f}_V"),
        Check("base_bracket_leibniz", leib, tol.exact, "{f, gk} = g{f, k} + k{f, g}"),
        Check("base_bracket_jacobi", jac, tol.fd, "{f,{g,k}} + {g,{k,f}} + {k,{f,g}} = 0"),
        Check("bracket_equality_analytic", eq, tol.exact,
              "{f, g}_V = df(X_g) with i_{X_g} omega_h = dg - R_h(g) eta_h, eta_h(X_g) = 0"),
        Check("bracket_equality_fd", eq_fd, tol.fd,
              "{f, g}_V = cosymplectic bracket, finite-difference gradients"),
    ]


# cosymplectic suite

def _structure_checks(prefix: str, h: HamiltonianSection, points, tol,
                      expected_reeb: Callable | None = None) -> list[Check]:
    c = cosymplectic_from_section(h)
    dt = np.zeros(h.bundle.base_chart.dim)
    dt[0] = 1.0
    closed = eta_closed = reeb = eta_dt = reeb_formula = 0.0
    det = math.inf
    for v in points:
        res = c.axiom_residuals(v)
        closed = max(closed, res["omega_closed"])
        eta_closed = max(eta_closed, res["eta_closed"])
        det = min(det, res["volume_determinant"])
        reeb = max(reeb, res["reeb_omega"], res["reeb_eta"])
        eta_dt = max(eta_dt, float(np.max(np.abs(c.eta(v) - dt))))
        if expected_reeb is not None:
            reeb_formula = max(reeb_formula, float(np.max(np.abs(reeb_field(c, v) - expected_reeb(v)))))
    checks = [
        Check(f"{prefix}omega_closed", closed, tol.closed, "d omega_h = 0"),
        Check(f"{prefix}eta_closed", eta_closed, tol.closed, "d eta_h = 0"),
        Check(f"{prefix}volume_determinant", det, DET_FLOOR,
              "det [[omega_h, eta_h], [-eta_h^T, 0]] != 0", ">="),
        Check(f"{prefix}reeb_equations", reeb, tol.exact, "i_R omega_h = 0, eta_h(R) = 1"),
        Check(f"{prefix}eta_is_dt", eta_dt, tol.exact, "eta_h = -h^*(i_Z Omega) = dt"),
    ]
    if expected_reeb is not None:
        checks.append(Check(f"{prefix}reeb_closed_form", reeb_formula, tol.exact,
                            "R_h = d/dt + dH/dp_i d/dq^i - dH/dq^i d/dp_i"))
    return checks


def _canonical_reeb(h: HamiltonianSection):
    n = h.bundle.n

    def expected(v):
        g = differential(h.H, v)
        return np.concatenate([[1.0], g[n + 1:], -g[1:n + 1]])

    return expected


def cosymplectic_suite(ctx: _Context) -> list[Check]:
    rng = ctx.rng("cosymplectic")
    b, h, tol, model = ctx.bundle, ctx.section, ctx.tol, ctx.model
    c = cosymplectic_from_section(h)
    F = extended_hamiltonian(h)
    pts = model.sample_points(rng, ctx.n)
    Z = b.generator
    zeta = b.zeta()

    tfun = ScalarField(b.base_chart, lambda x: x[0], lambda x: np.eye(x.size)[0], "t")
    section_zero = vertical = shift = recon = mu_eta = proj = hor = t_field = 0.0
    for a in pts:
        v = b.mu(a)
        s = float(rng.uniform(-3, 3))
        u, w = rng.normal(size=(2, a.size))
        section_zero = max(section_zero, abs(F(h(v))))
        vertical = max(vertical, abs(differential(F, a) @ Z(a) - 1.0))
        shift = max(shift, abs(F(b.psi(s, a)) - F(a) - s))
        recon = max(recon, omega_reconstruction_residual(h, a, u, w, c))
        mu_eta = max(mu_eta, float(np.max(np.abs(b.mu_jacobian().T @ c.eta(v) + zeta(a)))))
        proj = max(proj, projection_consistency(h, a, c))
        once = horizontal_projector(h, a, u)
        hor = max(hor, float(np.max(np.abs(horizontal_projector(h, a, once) - once))),
                  float(np.max(np.abs(horizontal_projector(h, a, Z(a))))))
        t_field = max(t_field, float(np.max(np.abs(cosymplectic_ham_field(c, tfun, v)))))

    checks = [
        Check("extended_hamiltonian_vanishes_on_section", section_zero, tol.exact, "F_h(h(v)) = 0"),
        Check("extended_hamiltonian_vertical_derivative", vertical, tol.exact, "dF_h(Z) = 1"),
        Check("extended_hamiltonian_equivariance", shift, tol.exact, "F_h(psi_s(a)) = s + F_h(a)"),
        Check("omega_reconstruction", recon, tol.exact, "Omega = mu^* omega_h - dF_h ^ mu^* eta_h"),
        Check("mu_pullback_eta", mu_eta, tol.exact, "mu^* eta_h = -i_Z Omega"),
        Check("projection_consistency", proj, tol.exact, "T mu (X_{F_h}) = R_h o mu"),
        Check("horizontal_projector", hor, tol.exact, "hor o hor = hor, hor(Z) = 0"),
        Check("time_hamiltonian_field", t_field, tol.exact, "X_t = 0"),
    ]
    base_pts = np.array([b.mu(a) for a in pts])
    checks += _structure_checks("", h, base_pts, tol, _canonical_reeb(h))

    nu = ctx.config.level()
    chart = model.reduction_chart(nu)
    red_pts = np.array([chart.quotient_V(b.mu(a)) for a in model.sample_level(rng, ctx.n, nu)])
    if isinstance(model, OscillatorModel):
        expected = _oscillator_reeb(model, nu)
    else:
        # without a magnetic term the reduced chart is canonical
        expected = _canonical_reeb(chart.reduced_section) if nu == 0.0 else None
    checks += _structure_checks("reduced_", chart.reduced_section, red_pts, tol, expected)
    return checks


def _oscillator_reeb(model: OscillatorModel, nu: float):
    def expected(v):
        t, r, pr = v
        es, f = math.exp(model.sigma(t)), model.force(t)
        return np.array([1.0, es * pr, es * nu * nu / r ** 3 - 2 * f * r])

    return expected


# momentum suite

def momentum_suite(ctx: _Context) -> list[Check]:
    rng = ctx.rng("momentum")
    b, h, tol, model = ctx.bundle, ctx.section, ctx.tol, ctx.model
    pts = model.sample_points(rng, ctx.n)
    gs = model.sample_group(rng, ctx.n)
    shifts = list(rng.uniform(-3, 3, size=ctx.n))
    rep = canonical_action_report(model.action, b, pts, gs, shifts, tol.exact)
    ctrl = canonical_action_report(time_translation_action(b), b, pts, gs, shifts, tol.exact)
    J = model.momentum

    psi_inv = base = formula = gen = 0.0
    for a, s in zip(pts, shifts):
        psi_inv = max(psi_inv, float(np.max(np.abs(J(b.psi(s, a)) - J(a)))))
        base = max(base, float(np.max(np.abs(J.base(b.mu(a)) - J(a)))))
        gen = max(gen, momentum_generator_residual(J, a))
        formula = max(formula, _momentum_formula_residual(model, a))

    y0 = model.initial_state(ctx.config.initial, ctx.config.t0, ctx.config.nu)
    traj = simulate(model, y0, ctx.config.t0, ctx.config.t1, ctx.config.dt, ctx.config.integrator)
    drift = momentum_conservation(traj.states, model.momentum_of_state)

    return [
        Check("action_symplecticity", rep.symplecticity, tol.exact, "phi_g^* Omega = Omega"),
        Check("action_commutation", rep.commutation, tol.exact, "phi_g o psi_s = psi_s o phi_g"),
        Check("action_basic_form", rep.basic_form, tol.exact, "(i_Z Omega)(xi_A) = 0"),
        Check("negative_control_time_translation_basic_form", ctrl.basic_form, NEGATIVE_CONTROL_FLOOR,
              "(i_Z Omega)(d/dt) = -1 for the time-translation action", ">="),
        Check("hamiltonian_invariance", equivariance_check(model.action, h, pts, gs), tol.exact,
              "F_h(phi_g(a)) = F_h(a)"),
        Check("momentum_generator", gen, tol.exact, "xi_A = X_{J_xi}"),
        Check("momentum_principal_invariance", psi_inv, tol.exact, "J o psi_s = J"),
        Check("momentum_base_factorization", base, tol.exact, "J_V o mu = J"),
        Check("momentum_closed_form", formula, tol.exact, _momentum_formula_identity(model)),
        Check("momentum_conservation", drift, DRIFT_TOL, "J constant along the flow"),
    ]


def _momentum_formula_identity(model) -> str:
    if isinstance(model, OscillatorModel):
        return "J = q1 p2 - q2 p1 = p_theta"
    return "J = A Pi . e3 = p_phi"


def _momentum_formula_residual(model, a) -> float:
    J = model.momentum(a)[0]
    if isinstance(model, OscillatorModel):
        polar = model.cartesian_to_polar(a)
        return max(abs(J - model.angular_momentum(a)), abs(J - polar[4]))
    y = model.euler_to_state(a)
    return abs(J - model.momentum_of_state(y)[0])


# reduction suite

def reduction_suite(ctx: _Context) -> list[Check]:
    rng = ctx.rng("reduction")
    tol, model, cfg = ctx.tol, ctx.model, ctx.config
    nu = cfg.level()
    chart = model.reduction_chart(nu)
    level = model.sample_level(rng, ctx.n, nu)
    checks = []
    try:
        red = reduce(ctx.section, chart, level, level_tol=1e-9, fd_tol=math.inf)
        for name, value in red.validation.residuals().items():
            identity = {
                "reduced_hamiltonian": "F_{h_nu} o pi_nu = F_h on J^-1(nu)",
                "reduced_omega_pullback": "(pi^V_nu)^* omega_{h_nu} = i^* omega_h",
                "reduced_eta_pullback": "(pi^V_nu)^* eta_{h_nu} = i^* eta_h",
                "reduced_mu_equivariance": "mu_nu o pi_nu = pi^V_nu o mu",
            }[name]
            checks.append(Check(name, value, tol.fd, identity))
    except ValueError as exc:
        checks.append(Check("reduction_validation", math.inf, tol.fd, f"reduction failed: {exc}"))

    gs = model.sample_group(rng, ctx.n)
    orbit = _max(float(np.max(np.abs(chart.quotient_A(model.action.apply_A(g, a)) - chart.quotient_A(a))))
                 for a, g in zip(level, gs))
    checks.append(Check("quotient_orbit_invariance", orbit, tol.exact, "pi_nu(phi_g(a)) = pi_nu(a)"))

    field_res = _max(_reduced_field_residual(model, nu, y) for y in _level_states(model, rng, ctx.n, nu))
    checks.append(Check("reduced_field_projection", field_res, tol.fd,
                        "T pi (full field) = reduced field on J^-1(nu)"))

    y0 = model.initial_state(cfg.initial, cfg.t0, nu)
    run = run_reduction(model, nu, y0, cfg.t0, cfg.t1, cfg.dt, cfg.integrator, DRIFT_TOL)
    checks.append(Check("reduced_dynamics_consistency", run.consistency.discrepancy, CONSISTENCY_TOL,
                        "pi(full trajectory) = reduced trajectory"))
    checks.append(Check("level_set_drift", run.consistency.level_drift, DRIFT_TOL,
                        "full trajectory stays on J^-1(nu)"))

    if isinstance(model, OscillatorModel):
        checks.append(Check("reduced_bracket_equality", _reduced_bracket_residual(ctx, chart, level[:20]),
                            tol.fd, "{f, g}_nu o pi = {F, G} on J^-1(nu) for invariant extensions F, G"))
        checks.append(Check("reduced_omega_closed_form", _oscillator_omega_residual(model, chart, rng, ctx.n),
                            tol.exact, "omega_{h_nu} = dr^dp_r + (2Fr - e^sigma nu^2/r^3) dr^dt "
                                       "+ e^sigma p_r dp_r^dt"))
    else:
        checks.append(Check("reduced_field_sphere_chart", _sphere_field_residual(model, nu, rng, ctx.n),
                            tol.fd, "X_{F_{h_nu}} under Omega + nu area matches the reduced field"))
    return checks


def _level_states(model, rng, count, nu):
    pts = model.sample_level(rng, count, nu)
    if isinstance(model, HeavyTopModel):
        return [model.euler_to_state(a) for a in pts]
    return list(pts)


def _reduced_field_residual(model, nu, y) -> float:
    Jp = fd_jacobian(model.project_state, y)
    return float(np.max(np.abs(Jp @ model.vector_field(y) - model.reduced_vector_field(nu)(model.project_state(y)))))


def _reduced_bracket_residual(ctx: _Context, chart, level) -> float:
    """Brackets of reduced polynomials against brackets of invariant extensions upstairs."""
    model, b = ctx.model, ctx.bundle
    rb = chart.reduced_bundle
    fam = polynomial_family(rb.total_chart, count=6)
    J = model.momentum
    nu = float(chart.nu[0])

    def extend(f, weight):
        return ScalarField(b.total_chart, lambda a: f(chart.quotient_A(a))
                           + weight * (J(a)[0] - nu) * (a[2] ** 2 + a[3] ** 2), None, f"ext({f.name})")

    worst = 0.0
    for a in level:
        qa = chart.quotient_A(a)
        for i in range(len(fam)):
            for j in range(i + 1, len(fam)):
                down = symplectic_bracket(rb, fam[i], fam[j], qa)
                up = symplectic_bracket(b, extend(fam[i], 0.3), extend(fam[j], -0.7), a)
                worst = max(worst, abs(up - down))
    return worst


def _oscillator_omega_residual(model: OscillatorModel, chart, rng, count) -> float:
    c = cosymplectic_from_section(chart.reduced_section)
    nu = float(chart.nu[0])
    worst = 0.0
    for a in model.sample_level(rng, count, nu):
        v = chart.quotient_V(np.delete(a, 1))
        t, r, pr = v
        es, f = math.exp(model.sigma(t)), model.force(t)
        W = np.zeros((3, 3))  # order (t, r, p_r)
        W[1, 2], W[2, 1] = 1.0, -1.0
        k = 2 * f * r - es * nu * nu / r ** 3
        W[1, 0], W[0, 1] = k, -k
        W[2, 0], W[0, 2] = es * pr, -es * pr
        worst = max(worst, float(np.max(np.abs(c.omega(v) - W))))
    return worst


def sphere_to_ambient(s) -> np.ndarray:
    t, p, th, ph, pth, pph = s
    x, xt, xp = sphere_frame(th, ph)
    return np.concatenate([[t, p], x, pth * xt + pph * xp / math.sin(th) ** 2])


def _sphere_field_residual(model: HeavyTopModel, nu, rng, count) -> float:
    h = model.reduced_section(nu)
    F = extended_hamiltonian(h)
    omega = h.bundle.omega
    field = model.reduced_vector_field(nu)
    worst = 0.0
    for a in model.sample_level(rng, count, nu):
        s = model.euler_to_sphere(a)
        X = hamiltonian_vector_field(omega, F, s)
        pushed = fd_jacobian(sphere_to_ambient, s) @ X
        worst = max(worst, float(np.max(np.abs(pushed - field(sphere_to_ambient(s))))))
    return worst


# magnetic suite

def magnetic_suite(ctx: _Context) -> list[Check]:
    rng = ctx.rng("magnetic")
    tol, model = ctx.tol, ctx.model
    b = ctx.bundle
    beta = polynomial_two_form(b.config_chart)
    m = MagneticTerm(beta, b.total_chart)
    pts = model.sample_points(rng, ctx.n)
    fam = polynomial_family(b.total_chart, count=8)
    base_fam = polynomial_family(b.base_chart, count=8)
    basic = [ScalarField(b.total_chart, lambda a, k=k: a[k] ** 2 + a[0] * a[k], None, f"basic{k}")
             for k in b.total_chart.base_indices[1:]]
    deformed = magnetic_deform(b, m)

    closed = bracket = basic_res = base_res = invariance = 0.0
    for a in pts:
        closed = max(closed, closedness_residual(beta, b.config_chart.check_point(a[list(b.total_chart.base_indices)])))
        bracket = max(bracket, _max(deformed_bracket_residual(b, m, f, g, a)
                                    for i, f in enumerate(fam) for g in fam[i + 1:]))
        basic_res = max(basic_res, _max(abs(symplectic_bracket(deformed, f, g, a) - symplectic_bracket(b, f, g, a))
                                        for f in basic for g in basic))
        v = b.mu(a)
        for i, f in enumerate(base_fam):
            for g in base_fam[i + 1:]:
                up = symplectic_bracket(deformed, b.lift_function(f), b.lift_function(g), a)
                base_res = max(base_res, abs(up - base_deformed_bracket(b, m, f, g, v)))
        s = float(rng.uniform(-3, 3))
        invariance = max(invariance, float(np.max(np.abs(m.B(b.psi(s, a)) - m.B(a)))))

    checks = [
        Check("magnetic_beta_closed", closed, tol.closed, "d beta = 0"),
        Check("magnetic_bracket_formula", bracket, tol.exact, "{F, G}^B = {F, G} + beta^v(dF, dG)"),
        Check("magnetic_basic_brackets_unchanged", basic_res, tol.exact,
              "{F, G}^B = {F, G} for F, G functions of (t, q)"),
        Check("magnetic_base_bracket", base_res, tol.exact,
              "{f o mu, g o mu}^B = ({f, g}_V + betabar^v(df, dg)) o mu"),
        Check("magnetic_term_invariance", invariance, tol.exact, "psi_s^* B = B"),
    ]
    if isinstance(model, HeavyTopModel):
        nu = ctx.config.nu if ctx.config.nu not in (None, 0.0) else DEFAULT_MAGNETIC_NU
        checks += _sphere_magnetic_checks(model, nu, rng, ctx.n, tol)
    return checks


def _sphere_magnetic_checks(model: HeavyTopModel, nu: float, rng, count, tol) -> list[Check]:
    sb = model.sphere_bundle
    fam = polynomial_family(sb.total_chart, count=8)
    pts = [model.euler_to_sphere(a) for a in model.sample_points(rng, count)]
    literal = MagneticTerm(model.area_two_form(nu), sb.total_chart)
    used = model.reduced_magnetic_term(nu)
    res_literal = res_used = area = 0.0
    for s in pts:
        res_literal = max(res_literal, _max(deformed_bracket_residual(sb, literal, f, g, s)
                                            for i, f in enumerate(fam) for g in fam[i + 1:]))
        res_used = max(res_used, _max(deformed_bracket_residual(sb, used, f, g, s)
                                      for i, f in enumerate(fam) for g in fam[i + 1:]))
        x, xt, xp = sphere_frame(s[2], s[3])
        area = max(area, abs(literal.beta(s[[0, 2, 3]])[1, 2] - nu * area_form(x, xt, xp)),
                   abs(area_form(x, xt, xp) + math.sin(s[2])))
    return [
        Check("sphere_area_form", area, tol.exact, "area(x)(x_theta, x_phi) = -x.(x_theta x x_phi) = -sin theta"),
        Check("sphere_magnetic_bracket_formula", res_literal, tol.exact,
              "{F, G}^B = {F, G} + beta^v(dF, dG), beta = nu area on T*S^2"),
        Check("sphere_reduced_magnetic_bracket_formula", res_used, tol.exact,
              "{F, G}^B = {F, G} + beta^v(dF, dG), beta = reduced magnetic term"),
    ]


SUITE_FUNCS = {
    "bracket": bracket_suite,
    "cosymplectic": cosymplectic_suite,
    "momentum": momentum_suite,
    "reduction": reduction_suite,
    "magnetic": magnetic_suite,
}


def run_verification(config: RunConfig, suite: str = "all") -> VerificationReport:
    if suite != "all" and suite not in SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}; choose from {['all', *SUITES]}")
    ctx = _Context(config)
    report = VerificationReport(config.model, suite, config.seed, config.digest(), config.samples)
    report.checks += _antisymmetry(ctx, np.random.default_rng([config.seed, len(SUITES)]))
    for name in (SUITES if suite == "all" else (suite,)):
        report.checks += SUITE_FUNCS[name](ctx)
    return report

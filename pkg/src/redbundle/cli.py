"""Command-line front end: ``redbundle {simulate,reduce,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 precondition failure (e.g. an initial condition off the level set).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .coefficients import CoefficientParseError
from .config import ConfigError, RunConfig, load_config
from .integrators import ConvergenceError
from .models import ModelConfigError, build_model
from .simulation import run_reduction, simulate
from .verify import SUITES, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3
LEVEL_TOL = 1e-9
FLOAT_FORMAT = "%.17e"

log = logging.getLogger("redbundle")


class PreconditionError(RuntimeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--model", choices=("oscillator", "heavytop"))
    p.add_argument("--integrator", choices=("rk4", "midpoint"))
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--nu", type=float, help="momentum level")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="redbundle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="integrate the full system and write a CSV trajectory")
    _common(sim)
    sim.add_argument("--out", required=True, help="output CSV path")

    red = sub.add_parser("reduce", help="integrate full and reduced systems and compare")
    _common(red)
    red.add_argument("--out", required=True,
                     help="output prefix: writes <out>_full_projected.csv and <out>_reduced.csv")
    red.add_argument("--report", help="JSON report path (default <out>_report.json)")

    ver = sub.add_parser("verify", help="run verification suites and write a JSON report")
    _common(ver)
    ver.add_argument("--suite", default="all", choices=("all", *SUITES))
    ver.add_argument("--report", help="JSON report path (default: stdout)")
    return parser


def _overrides(args) -> dict:
    keys = ("model", "integrator", "t0", "t1", "dt", "nu", "seed", "samples")
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def write_csv(path: str | Path, names, states: np.ndarray, extra_names=(), extra=None) -> None:
    header = list(names) + list(extra_names)
    rows = states if extra is None else np.hstack([states, extra])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([FLOAT_FORMAT % x for x in row])


def _write_json(path: str | Path | None, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_simulate(cfg: RunConfig, out: str) -> int:
    model = build_model(cfg.model, cfg.model_params)
    y0 = model.initial_state(cfg.initial, cfg.t0, cfg.nu)
    traj = simulate(model, y0, cfg.t0, cfg.t1, cfg.dt, cfg.integrator)
    J = np.array([model.momentum_of_state(y) for y in traj.states])
    write_csv(out, traj.names, traj.states, ["J"], J)
    log.info("wrote %d rows to %s, J drift %.3e", len(traj.states), out, float(np.max(np.abs(J - J[0]))))
    return EXIT_OK


def cmd_reduce(cfg: RunConfig, out: str, report: str | None) -> int:
    model = build_model(cfg.model, cfg.model_params)
    nu = cfg.level()
    model.check_nu(nu)
    y0 = model.initial_state(cfg.initial, cfg.t0, nu)
    residual = model.level_residual_state(y0, nu)
    if residual > LEVEL_TOL:
        raise PreconditionError(
            f"initial condition is off the level set J = {nu}: level residual {residual:.3e} > {LEVEL_TOL:.0e}")
    run = run_reduction(model, nu, y0, cfg.t0, cfg.t1, cfg.dt, cfg.integrator)
    write_csv(f"{out}_full_projected.csv", run.projected.names, run.projected.states)
    write_csv(f"{out}_reduced.csv", run.reduced.names, run.reduced.states)
    passed = run.consistency.discrepancy <= 1e-5 and not run.consistency.drift_flagged
    payload = {
        "model": cfg.model, "nu": nu, "seed": cfg.seed, "config_hash": cfg.digest(),
        "integrator": cfg.integrator, "t0": cfg.t0, "t1": cfg.t1, "dt": cfg.dt,
        "steps": len(run.full.states) - 1,
        "discrepancy": run.consistency.discrepancy,
        "level_drift": run.consistency.level_drift,
        "level_drift_flagged": run.consistency.drift_flagged,
        "momentum_drift": run.momentum_drift,
        "initial_level_residual": residual,
        "passed": passed,
    }
    if cfg.model == "heavytop":
        q = run.reduced.states[:, 2:5]
        payload["sphere_constraint_drift"] = float(np.max(np.abs(np.linalg.norm(q, axis=1) - 1.0)))
    _write_json(report or f"{out}_report.json", payload)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(cfg: RunConfig, suite: str, report: str | None) -> int:
    rep = run_verification(cfg, suite)
    text = rep.to_json()
    if report is None:
        sys.stdout.write(text)
    else:
        Path(report).write_text(text)
    for c in rep.failures():
        log.warning("FAILED %s: %.3e %s %.1e", c.name, c.value, c.relation, c.tolerance)
    return EXIT_OK if rep.passed else EXIT_FAIL


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out)
        if args.command == "reduce":
            return cmd_reduce(cfg, args.out, args.report)
        return cmd_verify(cfg, args.suite, args.report)
    except (ConfigError, ModelConfigError, CoefficientParseError) as exc:
        print(f"redbundle: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"redbundle: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(f"redbundle: integration failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"redbundle: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

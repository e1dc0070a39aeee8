"""Command-line entry point: ``thermosolutal <subcommand> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
3 the solver blew up.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import report
from .bounds import FreeParameters, evaluate_ledger, prepare_inputs, tune_free_parameters
from .convection import simulate
from .domain import Grid2D
from .errors import BlowUpError, ConfigError
from .harness import load_twinspec, scaling_study, sobolev_check, twin_run, verify_all
from .scenario import load_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BLOWUP = 0, 1, 2, 3


def _warn(msg: str):
    print(f"warning: {msg}", file=sys.stderr)


def _scenario(args):
    sc = load_scenario(args.config)
    if args.grid_override:
        sc = sc.with_grid(args.grid_override)
    return sc


def _twinspec(args):
    spec = load_twinspec(args.config)
    if args.grid_override:
        spec = type(spec)(spec.base.with_grid(args.grid_override), spec.coeffs1, spec.coeffs2)
    return spec


def _out(args, name: str) -> Path:
    return Path(args.out) / name


def cmd_solve(args) -> int:
    sc = _scenario(args)
    t0 = time.perf_counter()
    traj = simulate(sc)
    path = traj.write_csv(_out(args, f"{sc.name}_trajectory.csv"))
    print(f"{len(traj) - 1} steps to t = {traj.t[-1]:g} in {time.perf_counter() - t0:.1f} s -> {path}")
    return EXIT_OK


def cmd_constants(args) -> int:
    sc = _scenario(args)
    inp = prepare_inputs(sc, n_samples=args.time_samples)
    fp = FreeParameters()
    tuning = None
    if args.tune:
        res = tune_free_parameters(inp)
        fp = res.params
        tuning = {"objective_default": res.objective_default, "objective_tuned": res.objective,
                  "evaluations": res.evaluations, "diagnostic": res.diagnostic}
        print(f"tuned objective {res.objective:.6g} (default {res.objective_default:.6g}, "
              f"{res.evaluations} evaluations)")
    dc = evaluate_ledger(inp, fp)
    out = dc.to_dict()
    if tuning is not None:
        out["tuning"] = tuning
    path = report.write_json(_out(args, f"{sc.name}_constants.json"), out)
    for note in dc.notes:
        print(f"note: {note}")
    print(f"M = {dc.M:.6g}  alpha1 = {dc.alpha1:.6g}  alpha2 = {dc.alpha2:.6g}  R(T) = {dc.R[-1]:.6g} -> {path}")
    return EXIT_OK


def cmd_twin(args) -> int:
    spec = _twinspec(args)
    for w in spec.warnings():
        _warn(w)
    rep = twin_run(spec, n_samples=args.time_samples)
    stem = spec.base.name
    rep.write_csv(_out(args, f"{stem}_twin.csv"))
    report.write_json(_out(args, f"{stem}_twin.json"), rep.to_dict())
    print(f"max F = {rep.max_F:.6g}  max F/bound = {rep.max_ratio:.6g}  "
          f"{'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _factors(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"factors must be comma-separated numbers, got {text!r}") from None
    if len(vals) < 3 or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("need at least 3 positive factors")
    return vals


def cmd_scaling(args) -> int:
    spec = _twinspec(args)
    for w in spec.warnings():
        _warn(w)
    res = scaling_study(spec, args.factors, n_samples=args.time_samples)
    report.write_json(_out(args, f"{spec.base.name}_scaling.json"), res.to_dict())
    if res.inconclusive:
        print("slope inconclusive: F below round-off level")
        return EXIT_FAIL
    ok = abs(res.slope - 2.0) <= 0.1
    print(f"slope = {res.slope:.4f} (residual {res.residual:.2e}) {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    sc = _scenario(args)
    rep = verify_all(sc, n_samples=args.time_samples, seed=args.seed)
    report.write_json(_out(args, f"{sc.name}_verify.json"), rep.to_dict())
    for c in rep.checks:
        print(c.line())
    if any(c.name == "simulation" for c in rep.checks):
        return EXIT_BLOWUP
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sobolev(args) -> int:
    n = args.grid_override or args.grid
    rep = sobolev_check(Grid2D(n, n, 1.0, 1.0), args.samples, args.seed)
    report.write_json(_out(args, f"sobolev_{n}.json"), rep.to_dict())
    print(f"{rep.n_samples} samples, worst ratio {rep.worst_ratio:.6g} {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-override", type=int, metavar="N", help="replace the grid by N x N cells")
    common.add_argument("--time-samples", type=int, metavar="N", help="time samples for data curves (default 1000)")
    common.add_argument("--seed", type=int, help="seed for random test fields (default 0)")
    common.add_argument("--out", metavar="DIR", help="output directory (default: current directory)")

    p = argparse.ArgumentParser(prog="thermosolutal", parents=[common],
                                description="Reacting thermosolutal convection: solver, a priori bounds and checks.")
    p.set_defaults(grid_override=None, time_samples=1000, seed=0, out=".")
    sub = p.add_subparsers(dest="command", required=True)
    # subcommand copies must not clobber values given before the subcommand
    sub_common = argparse.ArgumentParser(add_help=False)
    for action in common._actions:
        sub_common.add_argument(*action.option_strings, type=action.type, metavar=action.metavar,
                                help=action.help, default=argparse.SUPPRESS)

    def add(name, func, help_, config=True):
        sp = sub.add_parser(name, parents=[sub_common], help=help_)
        if config:
            sp.add_argument("config", help="JSON configuration file")
        sp.set_defaults(func=func)
        return sp

    add("solve", cmd_solve, "integrate a scenario and write the trajectory CSV")
    sp = add("constants", cmd_constants, "write the a priori constant ledger as JSON")
    sp.add_argument("--tune", action="store_true", help="tune the free parameters first")
    add("twin", cmd_twin, "twin run: difference energy against the theorem bound")
    sp = add("scaling", cmd_scaling, "slope of max F against the perturbation size")
    sp.add_argument("--factors", type=_factors, default=[0.1, 0.05, 0.025], help="comma-separated factors")
    add("verify", cmd_verify, "run the verification battery on a scenario")
    sp = add("sobolev", cmd_sobolev, "check the Sobolev inequality on random fields", config=False)
    sp.add_argument("--grid", type=int, default=128, metavar="N")
    sp.add_argument("--samples", type=int, default=100, metavar="M")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.time_samples < 2:
        print("error: --time-samples must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BlowUpError as exc:
        print(f"error: solver blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

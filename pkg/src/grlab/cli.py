"""Command-line front end: seeded experiments with machine-readable output.

Every run's JSON output embeds the fully resolved configuration and the
toolkit version, and is byte-identical for identical (config, seed, version).
Exit codes: 0 success, 2 usage error, 3 domain error, 4 resource error,
5 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__, acceptance, asymptotics, constants, fieldlab, montecarlo
from .errors import DomainError, GrlabError, ResourceError
from .fbm import TimeGrid, sample_degenerate_fbm, sample_drifted_fbm, sample_fbm
from .reflected import ProcessParams, reflect


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def _emit(args, result, output_path=None, fmt="json"):
    config = {k: _jsonable(v) for k, v in sorted(vars(args).items())
              if k not in ("func", "config")}
    payload = {
        "toolkit_version": __version__,
        "config": config,
        "result": _jsonable(result),
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path, header, rows):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if path:
            out.close()


def _horizon(text):
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    value = float(text)
    return value


def _seed_of(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GRL_SEED")
    return int(env) if env else None


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_simulate(args):
    seed = _seed_of(args)
    if args.kind == "drifted":
        n1 = int(round(args.S1 / args.step))
        n2 = int(round(args.S2 / args.step))
        grid = TimeGrid(-n1 * args.step, args.step, n1 + n2 + 1)
        path = sample_drifted_fbm(grid, args.alpha, args.a, seed)
        values = path.values
    else:
        grid = TimeGrid.over(0.0, args.T, args.step)
        if args.kind == "fbm":
            path = sample_fbm(grid, args.H, seed)
            values = path.values
        elif args.kind == "degenerate":
            path = sample_degenerate_fbm(grid, seed)
            values = path.values
        else:  # reflected
            path = sample_fbm(grid, args.H, seed)
            values = reflect(path, args.c, args.gamma).w_values
    _write_csv(args.output, ["t", "value"],
               zip(grid.points.tolist(), values.tolist()))
    return 0


def _cmd_tail(args):
    params = ProcessParams(args.H, args.c, args.gamma, _horizon(args.T))
    seed = _seed_of(args)
    if params.is_infinite_horizon:
        est = montecarlo.estimate_tail_infinite(
            params, args.u, args.n, args.step, seed=seed, kappa=args.kappa)
    else:
        est = montecarlo.estimate_tail(params, args.u, args.n, args.step, seed=seed)
    _emit(args, est, args.output)
    return 0


def _cmd_ratio(args):
    params = ProcessParams(args.H, args.c, args.gamma, _horizon(args.T))
    est = montecarlo.estimate_ratio(params, args.u, args.n, args.step,
                                    seed=_seed_of(args), kappa=args.kappa)
    _emit(args, est, args.output)
    return 0


def _cmd_constants(args):
    seed = _seed_of(args)
    if args.which == "exact":
        result = {"piterbarg": constants.exact_constant(args.alpha, args.a)
                  if args.a is not None else None,
                  "pickands": constants.exact_pickands(args.alpha)}
        result["value"] = (result["piterbarg"] if args.a is not None
                           else result["pickands"])
    elif args.which == "pickands":
        if args.limit:
            result = constants.pickands_limit(args.alpha, grid_step=args.step,
                                              n_samples=args.n, seed=seed)
        else:
            result = constants.pickands_window(args.alpha, args.T, args.step,
                                               args.n, seed)
    else:  # piterbarg
        if args.a is None:
            raise DomainError("piterbarg constants require --a")
        if args.limit:
            sided = "two-sided" if args.two_sided else "one-sided"
            result = constants.piterbarg_limit(args.alpha, args.a, sided,
                                               grid_step=args.step,
                                               n_samples=args.n, seed=seed)
        else:
            result = constants.piterbarg_window(args.alpha, args.a, args.S1,
                                                args.S2, args.step, args.n, seed)
    _emit(args, result, args.output)
    return 0


def _cmd_asymptotics(args):
    T = _horizon(args.T) if args.T is not None else None
    formula = args.formula
    if formula == "psi0-inf":
        result = asymptotics.psi0_inf(args.u, args.H, args.c)
    elif formula == "psi0-finite":
        result = asymptotics.psi0_finite(args.u, args.H, args.c, T)
    elif formula == "psi-gamma-inf":
        result = asymptotics.psi_gamma_inf(args.u, args.H, args.c, args.gamma)
    elif formula == "psi-gamma-finite":
        result = asymptotics.psi_gamma_finite(args.u, args.H, args.c, args.gamma, T)
    elif formula == "ratio-constant":
        value, provenance = asymptotics.ratio_constant(args.H, args.gamma, T)
        result = {"value": value, "provenance": provenance}
    elif formula == "std-normal-tail":
        result = {"value": asymptotics.std_normal_tail(args.u)}
    elif formula == "maximizer-y":
        s0, t0, value = asymptotics.maximizer_Y(args.H, args.c)
        result = {"s0": s0, "t0": t0, "max_value": value}
    elif formula == "variance-y":
        result = {"value": asymptotics.variance_Y(args.s, args.t, args.H,
                                                  args.gamma, args.c)}
    elif formula == "variance-z":
        result = {"value": asymptotics.variance_Z(args.s, args.t, args.H,
                                                  args.gamma)}
    else:
        raise DomainError(f"unknown formula {formula!r}")
    _emit(args, result, args.output)
    return 0


def _cmd_fieldlab(args):
    with open(args.spec) as fh:
        data = json.load(fh)
    spec = fieldlab.FieldSpec.from_dict(data)
    resolution = data.get("resolution", 48)
    u_ladder = [float(x) for x in args.u.split(",")]
    rows = fieldlab.compare_to_theory(spec, u_ladder, args.n,
                                      resolution=resolution, seed=_seed_of(args))
    _write_csv(args.output,
               ["u", "mc_probability", "mc_std_error", "theory_value", "ratio"],
               [[r["u"], r["mc_probability"], r["mc_std_error"],
                 r["theory_value"], r["ratio"]] for r in rows])
    return 0


def _cmd_verify(args):
    numbers = None
    if args.criteria:
        numbers = {int(x) for x in args.criteria.split(",")}
    results = acceptance.run_all(numbers)
    failures = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.number}: {r.name} ({r.runtime_s:.1f}s)")
        print(f"        {r.detail}")
        if not r.passed:
            failures.append(r.number)
    if failures:
        print(f"verification FAILED for criteria: {sorted(failures)}", file=sys.stderr)
        return 5
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grlab",
        description="Simulation and verification toolkit for gamma-reflected "
                    "processes with fBm input.")
    parser.add_argument("--config", help="JSON file providing defaults for the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (falls back to the GRL_SEED env var)")
        p.add_argument("--threads", default="auto",
                       help="worker hint; results do not depend on it")
        p.add_argument("--output", default=None, help="write results to this path")

    p = sub.add_parser("simulate", help="emit a sampled path as CSV")
    p.add_argument("--kind", choices=["fbm", "degenerate", "drifted", "reflected"],
                   default="fbm")
    p.add_argument("--H", type=float, default=0.5)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--step", type=float, default=2.0**-8)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--S1", type=float, default=0.0)
    p.add_argument("--S2", type=float, default=1.0)
    common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("tail", help="Monte Carlo exceedance probability")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--T", required=True, help="horizon, a number or 'inf'")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--step", type=float, default=2.0**-10)
    p.add_argument("--kappa", type=float, default=montecarlo.DEFAULT_KAPPA)
    common(p)
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("ratio", help="coupled psi_gamma / psi_0 estimate")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--step", type=float, default=2.0**-10)
    p.add_argument("--kappa", type=float, default=montecarlo.DEFAULT_KAPPA)
    common(p)
    p.set_defaults(func=_cmd_ratio)

    p = sub.add_parser("constants", help="Pickands / Piterbarg constants")
    p.add_argument("which", choices=["pickands", "piterbarg", "exact"])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--limit", action="store_true",
                   help="estimate the growing-window limit instead of one window")
    p.add_argument("--two-sided", action="store_true", dest="two_sided")
    p.add_argument("--T", type=float, default=8.0, help="Pickands window length")
    p.add_argument("--S1", type=float, default=0.0)
    p.add_argument("--S2", type=float, default=8.0)
    p.add_argument("--step", type=float, default=constants.DEFAULT_STEP)
    p.add_argument("--n", type=int, default=100_000)
    common(p)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("asymptotics", help="evaluate a closed-form formula")
    p.add_argument("formula", choices=[
        "psi0-inf", "psi0-finite", "psi-gamma-inf", "psi-gamma-finite",
        "ratio-constant", "std-normal-tail", "maximizer-y",
        "variance-y", "variance-z"])
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--H", type=float, default=0.5)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--T", default=None)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    common(p)
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("fieldlab", help="build a field spec and compare MC to theory")
    p.add_argument("--spec", required=True, help="JSON FieldSpec (plus optional resolution)")
    p.add_argument("--u", default="2,3", help="comma-separated exceedance levels")
    p.add_argument("--n", type=int, default=100_000)
    common(p)
    p.set_defaults(func=_cmd_fieldlab)

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--criteria", default=None,
                   help="comma-separated criterion numbers (default: all)")
    common(p)
    p.set_defaults(func=_cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    # two-phase parse so --config supplies defaults that explicit flags override
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        with open(pre.config) as fh:
            defaults = json.load(fh)
        parser.set_defaults(**defaults)
        # subcommands parse into their own namespace, so their defaults
        # must be updated too for the config to take effect
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sub in action.choices.values():
                    sub.set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 4
    except (DomainError, GrlabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())

"""Command-line front end: reproducible batch runs with CSV/JSON output.

Subcommands
-----------
simulate     per-path rows (path, t, price, position, wealth, sigma)
evaluate     closed-form expected utility vs a Monte Carlo estimate
verify       the structural-identity suite; exit code 2 on any failure
asymptotics  log gamma vs its Stirling asymptote over a log-spaced horizon grid
sweep        stationary utilities with and without price history over a beta grid

Floats are printed with 17 significant digits, so every CSV value
round-trips to the exact double; identical arguments and seed produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .closedform import (
    cond_eu_adaptive,
    cond_eu_static,
    log_gamma_beta,
    log_h_beta,
    stationary_eu_adaptive,
    stationary_eu_static,
)
from .errors import StabilityError
from .model import ModelParams, check_horizon, stationary_sigma
from .montecarlo import InitialLaw, StrategySpec, estimate_utility, sample_paths
from .quadform import build_A
from .suite import run_identity_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage-error exit code 1 (2 is reserved for failed checks)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(columns, rows, meta, fmt, out_path):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buf.getvalue()
    else:
        text = json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_output_flags(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default csv)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write output to PATH instead of stdout")


def _add_model_flags(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float, help="autoregression coefficient")
    group.add_argument("--beta", type=float, help="mean-reversion coefficient alpha - 1")
    p.add_argument("--sigma", type=float, default=None,
                   help="innovation scale (forbidden with --stationary)")
    law = p.add_mutually_exclusive_group(required=True)
    law.add_argument("--x0", type=float, help="fixed initial price")
    law.add_argument("--stationary", action="store_true",
                     help="X0 ~ N(0,1) with sigma = sqrt(1 - alpha^2)")


def _resolve_model(args, parser):
    beta = args.beta if args.beta is not None else args.alpha - 1.0
    if args.stationary:
        if args.sigma is not None:
            parser.error("--stationary determines sigma; do not pass --sigma")
        try:
            sigma = stationary_sigma(beta)
        except StabilityError as exc:
            parser.error(str(exc))
        law = InitialLaw.stationary()
    else:
        if args.sigma is None:
            parser.error("--sigma is required unless --stationary is given")
        sigma = args.sigma
        law = InitialLaw.fixed(args.x0)
    try:
        params = ModelParams.from_beta(beta, sigma)
    except ValueError as exc:
        parser.error(str(exc))
    return params, law


def _resolve_strategy(value, horizon, parser) -> StrategySpec:
    if value in ("adaptive", "static", "zero"):
        return StrategySpec(value)
    if value.startswith("coeffs="):
        path = value[len("coeffs="):]
        try:
            with open(path, encoding="utf-8") as fh:
                coeffs = [float(line.strip()) for line in fh if line.strip()]
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read coefficient file {path!r}: {exc}")
        if len(coeffs) != horizon:
            parser.error(
                f"coefficient file has {len(coeffs)} entries, horizon is {horizon}"
            )
        return StrategySpec.linear(coeffs)
    parser.error(
        f"unknown strategy {value!r}; expected adaptive, static, zero or coeffs=<file>"
    )


def _horizon(args, parser) -> int:
    try:
        return check_horizon(args.horizon)
    except (TypeError, ValueError) as exc:
        parser.error(str(exc))


def _meta(command, args, params=None, horizon=None):
    meta = {"command": command, "version": __version__, "seed": getattr(args, "seed", None)}
    if params is not None:
        meta["alpha"] = params.alpha
        meta["beta"] = params.beta
        meta["sigma"] = params.sigma
    if horizon is not None:
        meta["horizon"] = horizon
    return meta


def _cmd_simulate(args, parser) -> int:
    params, law = _resolve_model(args, parser)
    T = _horizon(args, parser)
    strategy = _resolve_strategy(args.strategy, T, parser)
    if args.paths < 1:
        parser.error("--paths must be >= 1")
    coeffs = strategy.coefficient_vector(T, params)
    rows = []
    for i, path in enumerate(sample_paths(law, T, params, args.paths, args.seed)):
        base = path.prices[:-1] if strategy.state_linear else np.full(T, path.x0)
        positions = coeffs * base
        wealth = np.cumsum(positions * np.diff(path.prices))
        rows.append({"path": i, "t": 0, "price": float(path.prices[0]),
                     "position": 0.0, "wealth": 0.0, "sigma": params.sigma})
        for t in range(1, T + 1):
            rows.append({"path": i, "t": t, "price": float(path.prices[t]),
                         "position": float(positions[t - 1]),
                         "wealth": float(wealth[t - 1]), "sigma": params.sigma})
    columns = ["path", "t", "price", "position", "wealth", "sigma"]
    _emit(columns, rows, _meta("simulate", args, params, T), args.format, args.out)
    return EXIT_OK


def _closed_form_value(strategy, law, T, params, parser) -> float:
    if strategy.kind == "zero":
        return -1.0
    if strategy.kind == "linear":
        parser.error("no closed form for coefficient-file strategies; use simulate")
    if law.kind == "fixed":
        lu = (cond_eu_adaptive if strategy.kind == "adaptive" else cond_eu_static)(
            law.z, T, params
        )
    else:
        lu = (
            stationary_eu_adaptive if strategy.kind == "adaptive" else stationary_eu_static
        )(params.beta, T)
    return lu.value


def _cmd_evaluate(args, parser) -> int:
    params, law = _resolve_model(args, parser)
    T = _horizon(args, parser)
    strategy = _resolve_strategy(args.strategy, T, parser)
    closed = _closed_form_value(strategy, law, T, params, parser)
    if args.paths < 2:
        parser.error("--paths must be >= 2")
    est = estimate_utility(strategy, law, T, params, args.paths, args.seed,
                           threads=args.threads)
    diff = est.mean - closed
    z_score = 0.0 if diff == 0.0 else (math.inf if est.stderr == 0.0 else diff / est.stderr)
    row = {
        "strategy": strategy.kind,
        "law": law.kind,
        "alpha": params.alpha,
        "beta": params.beta,
        "sigma": params.sigma,
        "horizon": T,
        "n": est.n,
        "seed": est.seed,
        "closed_form_eu": closed,
        "mc_mean": est.mean,
        "mc_stderr": est.stderr,
        "z_score": z_score,
    }
    _emit(list(row), [row], _meta("evaluate", args, params, T), args.format, args.out)
    return EXIT_OK


def _cmd_verify(args, parser) -> int:
    if args.dump_matrix:
        if args.horizon is None:
            parser.error("--dump-matrix requires --horizon")
        T = _horizon(args, parser)
        beta = args.beta if args.beta is not None else (
            args.alpha - 1.0 if args.alpha is not None else -0.5
        )
        sigma = args.sigma if args.sigma is not None else 1.0
        params = ModelParams.from_beta(beta, sigma)
        A = build_A(T, params)
        rows = [
            {"i": i + 1, "j": j + 1, "value": float(A[i, j])}
            for i in range(T)
            for j in range(T)
        ]
        _emit(["i", "j", "value"], rows, _meta("verify", args, params, T),
              args.format, args.out)
        return EXIT_OK

    results = run_identity_suite(
        seed=args.seed,
        grid_points=args.grid_points,
        quad_nodes=args.quad_nodes,
        inject_bug=args.inject_bug,
    )
    rows = [
        {
            "check": r.check,
            "alpha": r.alpha,
            "sigma": r.sigma,
            "T": r.T,
            "value": r.value,
            "tolerance": r.tolerance,
            "status": "pass" if r.passed else "fail",
        }
        for r in results
    ]
    columns = ["check", "alpha", "sigma", "T", "value", "tolerance", "status"]
    _emit(columns, rows, _meta("verify", args), args.format, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _cmd_asymptotics(args, parser) -> int:
    if (args.alpha is None) == (args.beta is None):
        parser.error("exactly one of --alpha/--beta is required")
    beta = args.beta if args.beta is not None else args.alpha - 1.0
    if args.t_max < 1 or args.t_points < 2:
        parser.error("--t-max must be >= 1 and --t-points >= 2")
    grid = np.unique(
        np.round(np.logspace(0.0, math.log10(args.t_max), args.t_points)).astype(int)
    )
    grid = grid[grid >= 1]
    rows = []
    for T in grid:
        lg = log_gamma_beta(int(T), beta)
        lh = log_h_beta(int(T), beta)
        rows.append({
            "T": int(T),
            "log_gamma": lg,
            "log_h": lh,
            "ratio": math.exp(lg - lh),
        })
    _emit(["T", "log_gamma", "log_h", "ratio"], rows, _meta("asymptotics", args),
          args.format, args.out)
    return EXIT_OK


def _parse_float_list(text, parser, flag):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        parser.error(f"{flag} expects a comma-separated list of numbers")
    if not values:
        parser.error(f"{flag} is empty")
    return values


def _cmd_sweep(args, parser) -> int:
    betas = _parse_float_list(args.betas, parser, "--betas")
    horizons = [int(h) for h in _parse_float_list(args.horizons, parser, "--horizons")]
    for beta in betas:
        if not -2.0 < beta < 0.0:
            parser.error(f"sweep betas must lie in (-2, 0), got {beta}")
    rows = []
    for beta in betas:
        for T in horizons:
            T = check_horizon(T)
            rows.append({
                "beta": beta,
                "T": T,
                "eu_adaptive": stationary_eu_adaptive(beta, T).value,
                "eu_static": stationary_eu_static(beta, T).value,
                "ratio": math.exp(0.5 * log_gamma_beta(T, beta)),
            })
    _emit(["beta", "T", "eu_adaptive", "eu_static", "ratio"], rows,
          _meta("sweep", args), args.format, args.out)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="ar1invest",
        description="Optimal exponential-utility trading on a Gaussian AR(1) price: "
                    "simulation, evaluation, verification, asymptotics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="simulate paths under a strategy",
        description="Emit per-path rows: path, t, price, position, wealth, sigma.")
    _add_model_flags(sim)
    sim.add_argument("--horizon", type=int, required=True)
    sim.add_argument("--strategy", default="adaptive",
                     help="adaptive | static | zero | coeffs=<file> "
                          "(file: one coefficient per line, length == horizon)")
    sim.add_argument("--paths", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    _add_output_flags(sim)
    sim.set_defaults(func=_cmd_simulate)

    ev = sub.add_parser(
        "evaluate", help="compare closed-form and Monte Carlo expected utility",
        description="Emit one record: closed_form_eu, mc_mean, mc_stderr, n, z_score "
                    "(plus the run's parameters).")
    _add_model_flags(ev)
    ev.add_argument("--horizon", type=int, required=True)
    ev.add_argument("--strategy", default="adaptive",
                    help="adaptive | static | zero")
    ev.add_argument("--paths", type=int, default=100_000)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--threads", type=int, default=1,
                    help="worker threads; results are identical for any value")
    _add_output_flags(ev)
    ev.set_defaults(func=_cmd_evaluate)

    ver = sub.add_parser(
        "verify", help="run the structural-identity suite",
        description="Rows: check, alpha, sigma, T, value, tolerance, status. "
                    "Exit code 2 if any check fails.")
    ver.add_argument("--alpha", type=float, default=None,
                     help="matrix dump only: autoregression coefficient")
    ver.add_argument("--beta", type=float, default=None,
                     help="matrix dump only: mean-reversion coefficient (default -0.5)")
    ver.add_argument("--sigma", type=float, default=None,
                     help="matrix dump only: innovation scale (default 1)")
    ver.add_argument("--horizon", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--grid-points", type=int, default=257)
    ver.add_argument("--quad-nodes", type=int, default=64)
    ver.add_argument("--dump-matrix", action="store_true",
                     help="emit the quadratic-form matrix entries (i, j, value) and exit")
    ver.add_argument("--inject-bug", action="store_true",
                     help="negative control: perturb the trailing diagonal entry so the "
                          "row-sum check must fail")
    _add_output_flags(ver)
    ver.set_defaults(func=_cmd_verify)

    asym = sub.add_parser(
        "asymptotics", help="gamma vs its Stirling asymptote",
        description="Rows: T, log_gamma, log_h, ratio over a log-spaced horizon grid.")
    asym.add_argument("--alpha", type=float, default=None)
    asym.add_argument("--beta", type=float, default=None)
    asym.add_argument("--t-max", type=int, default=1_000_000)
    asym.add_argument("--t-points", type=int, default=25)
    _add_output_flags(asym)
    asym.set_defaults(func=_cmd_asymptotics)

    sw = sub.add_parser(
        "sweep", help="stationary utilities over a beta grid",
        description="Rows: beta, T, eu_adaptive, eu_static, ratio "
                    "(ratio = sqrt(gamma), the advantage factor of using history).")
    sw.add_argument("--betas", default="-1.9,-1.5,-1.0,-0.5,-0.1",
                    help="comma-separated beta grid inside (-2, 0)")
    sw.add_argument("--horizons", default="1,2,5,10",
                    help="comma-separated horizon list")
    _add_output_flags(sw)
    sw.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (ValueError, ArithmeticError) as exc:
        print(f"ar1invest: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

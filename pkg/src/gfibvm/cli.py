"""Command line entry point.

Subcommands::

    gfibvm coverage     run the coverage study and write CSV or JSON
    gfibvm verify       compare results against the published table
    gfibvm bvm          mean TV distance to the Gaussian limit as n grows
    gfibvm spline-demo  free-knot spline fiducial chain with interval summary

Experiment settings come from built-in defaults, then a ``key=value`` file
(``--config``), then ``GFIBVM_SEED`` for the seed, then explicit flags.
Exit codes: 0 success or verify pass, 1 verify fail, 2 configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import harness, spline
from .errors import ConfigError

SEED_ENV = "GFIBVM_SEED"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

BVM_DEFAULTS = {"n_values": (20, 100, 500, 2000), "theta_values": (0.2, 0.5), "replicates": 50}


def _int_list(text: str) -> tuple:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _str_list(text: str) -> tuple:
    return tuple(v.strip() for v in text.split(",") if v.strip())


PARSERS = {
    "methods": _str_list,
    "n_values": _int_list,
    "theta_values": _float_list,
    "replicates": int,
    "level": float,
    "grid_size": int,
    "seed": lambda s: int(s, 0),
    "workers": int,
}


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = PARSERS[key](value)
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {e}") from None
    return out


def _env_seed(environ):
    text = environ.get(SEED_ENV, "").strip()
    if not text:
        return None
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={text!r} is not an integer") from None


def resolve_config(args, environ=None, defaults=None) -> harness.ExperimentConfig:
    environ = os.environ if environ is None else environ
    values = dict(defaults or {})
    if args.config:
        values.update(read_config_file(args.config))
    env_seed = _env_seed(environ)
    if env_seed is not None:
        values["seed"] = env_seed
    for key in PARSERS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    try:
        return harness.ExperimentConfig(**values)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from None


def _add_experiment_flags(p):
    p.add_argument("--config", help="key=value file with experiment settings")
    p.add_argument("--methods", type=_str_list, help="comma list from GF,ModGF,FlatBayes,JeffreysBayes")
    p.add_argument("--n-values", dest="n_values", type=_int_list)
    p.add_argument("--theta-values", dest="theta_values", type=_float_list)
    p.add_argument("--replicates", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--grid-size", dest="grid_size", type=int)
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--workers", type=int, help="worker processes (results do not depend on this)")


def _write(records, args):
    if args.output:
        harness.emit(records, args.format, args.output)
    elif args.format == "json":
        sys.stdout.write(harness.format_json(records))
    else:
        sys.stdout.write(harness.format_csv(records))


def cmd_coverage(args) -> int:
    cfg = resolve_config(args)
    _write(harness.run_experiment(cfg), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.input:
        records = harness.load(args.input, args.format)
    else:
        records = harness.run_experiment(resolve_config(args))
    report = harness.compare_to_reference(records, args.tolerance_coverage, args.tolerance_length)
    print(report.summary())
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bvm(args) -> int:
    cfg = resolve_config(args, defaults=BVM_DEFAULTS)
    rows = harness.bvm_decay(cfg.theta_values, cfg.n_values, cfg.replicates, cfg.seed, cfg.grid_size)
    print("theta0,n,mean_tv,replicates")
    for r in rows:
        print(f"{r.theta0!r},{r.n},{format(r.mean_tv, '.17g')},{r.replicates}")
    return EXIT_OK


def cmd_spline_demo(args) -> int:
    seed = args.seed
    if seed is None:
        seed = _env_seed(os.environ)
        seed = 0 if seed is None else seed
    truth = spline.SplineModel(p=args.degree, t=args.knots, alpha=args.alpha, sigma=args.sigma)
    try:
        truth.check()
    except ValueError as e:
        raise ConfigError(f"invalid true model: {e}") from None
    rng = np.random.default_rng(seed)
    data = spline.simulate(truth, args.n, rng)
    chain = spline.sample_gfd(data, truth, args.steps, seed)
    theta = chain.theta()
    names = [f"t{i + 1}" for i in range(truth.kappa)]
    names += [f"alpha{i}" for i in range(truth.p + truth.kappa + 1)]
    names += ["sigma2"]
    truth_vec = np.concatenate([truth.t, truth.alpha, [truth.sigma ** 2]])
    tail = 0.5 * (1.0 - args.level)
    print(f"n={args.n} steps={args.steps} acceptance={chain.acceptance_rate:.3f}")
    print("param,truth,mean,sd,lower,upper")
    for j, name in enumerate(names):
        col = theta[:, j]
        lo, hi = np.quantile(col, [tail, 1.0 - tail])
        print(f"{name},{truth_vec[j]:.6g},{col.mean():.6g},{col.std(ddof=1):.6g},{lo:.6g},{hi:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gfibvm", description="Fiducial coverage studies, BvM diagnostics and spline demo.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coverage", help="run the coverage study")
    _add_experiment_flags(p)
    p.add_argument("--output", "-o", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("verify", help="compare results with the published table")
    _add_experiment_flags(p)
    p.add_argument("--input", "-i", help="CSV or JSON results; runs the study when omitted")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--tolerance-coverage", type=float, default=0.015)
    p.add_argument("--tolerance-length", type=float, default=0.02)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bvm", help="TV distance to the Gaussian limit across n")
    _add_experiment_flags(p)
    p.set_defaults(func=cmd_bvm)

    p = sub.add_parser("spline-demo", help="free-knot spline fiducial chain")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--steps", type=int, default=3000)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--knots", type=_float_list, default=(0.5,))
    p.add_argument("--alpha", type=_float_list, default=(0.0, 1.0, -2.0))
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.set_defaults(func=cmd_spline_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"gfibvm: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as e:
        print(f"gfibvm: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

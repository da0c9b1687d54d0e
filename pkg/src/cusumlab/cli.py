"""Command-line entry point: ``cusumlab <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from .config import load_config
from .cusum import cusum_profile, estimate
from .errors import ConfigError, CusumLabError
from .gaussian import CovarianceSpec, build_sigma
from .harness import fmt, run_grid, summary, write_outputs
from .probe import InequalityParams, gaussian_sampler, probe_exponential_inequality
from .rates import RateParams, classify_rate

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_CELLS = 0, 1, 2, 3


def _read_series(path: str) -> np.ndarray:
    values = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            for cell in row:
                cell = cell.strip()
                if not cell:
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    if values:  # only a leading header is tolerated
                        raise
    return np.asarray(values, dtype=np.float64)


def cmd_sigma_matrix(args) -> int:
    cov = build_sigma(CovarianceSpec(args.n, args.sigma))
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in cov:
            w.writerow([fmt(x) for x in row])
    return EXIT_OK


def cmd_cusum(args) -> int:
    y = _read_series(args.input)
    profile = cusum_profile(y, args.gamma)
    est = estimate(profile, y.shape[0])
    print(f"k_hat={est.k_hat}")
    print(f"tau_hat={fmt(est.tau_hat)}")
    if args.profile_out:
        with open(args.profile_out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("k", "u"))
            for k, u in enumerate(profile, start=1):
                w.writerow((k, fmt(u)))
    return EXIT_OK


def cmd_check_conditions(args) -> int:
    verdict = classify_rate(RateParams(args.r, args.gamma, args.theta))
    print(json.dumps(verdict.to_dict()))
    return EXIT_OK


def cmd_probe_inequality(args) -> int:
    report = probe_exponential_inequality(
        InequalityParams(args.m, args.x, args.a),
        gaussian_sampler(args.n, args.sigma),
        args.level,
        args.reps,
        args.seed,
        min_reps=1 if args.allow_few_reps else 10_000,
    )
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config, profile=args.profile, reps=args.reps, base_seed=args.seed)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = run_grid(cfg, threads=args.threads)
    write_outputs(result, cfg, args.out_dir)
    info = summary(result, cfg)
    print(json.dumps({k: info[k] for k in ("records", "bound_violations", "bound_ok_fraction_n_ge_500")}))
    if result.failures:
        for f in result.failures:
            print(f"cell failed: gamma={f.gamma} theta={f.theta} n={f.n}: {f.error}", file=sys.stderr)
        return EXIT_CELLS
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cusumlab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma-matrix", help="write the noise covariance as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sigma_matrix)

    p = sub.add_parser("cusum", help="estimate the change point of a series")
    p.add_argument("--input", required=True, help="CSV of observations")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--profile-out", help="also write the profile U[k] as CSV")
    p.set_defaults(func=cmd_cusum)

    p = sub.add_parser("check-conditions", help="rate-condition verdict as JSON")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.set_defaults(func=cmd_check_conditions)

    p = sub.add_parser("probe-inequality", help="Monte Carlo probe of the maximal inequality")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--level", type=float, default=10.0, help="truncation level")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-few-reps", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_probe_inequality)

    p = sub.add_parser("simulate", help="run the replication grid")
    p.add_argument("--config")
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--profile", choices=("desk", "paper"), default="paper")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CusumLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

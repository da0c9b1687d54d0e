"""Replicated CUSUM experiments over a (gamma, theta, n) grid.

Each replication draws one fresh noise row, adds the mean-shift profile with
``delta = n**theta`` and records the estimate together with both sides of the
location-error bound. Replications are independent tasks keyed by their grid
coordinates (see ``streams``), so output is identical for any thread count.
"""

from __future__ import annotations

import csv
import functools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, format_config
from .cusum import cusum_profile, deviation_bound_sides, estimate
from .errors import InvalidInputError
from .gaussian import CovarianceSpec, build_sigma, cholesky_factor, sample_row
from .model import ChangePointConfig, generate_row
from .streams import derive_stream

log = logging.getLogger(__name__)

BOUND_ENFORCED_FROM_N = 500

RECORD_FIELDS = ("gamma", "theta", "n", "rep", "tau_hat", "k_hat", "abs_err",
                 "bound_lhs", "bound_rhs", "bound_ok")
BOXPLOT_FIELDS = ("gamma", "theta", "n", "min", "q1", "median", "q3", "max", "mean", "count")


@dataclass(frozen=True)
class ReplicationRecord:
    gamma: float
    theta: float
    n: int
    rep: int
    tau_hat: float
    k_hat: int
    abs_err: float
    bound_lhs: float
    bound_rhs: float
    bound_ok: bool

    def sort_key(self):
        return (self.gamma, self.theta, self.n, self.rep)


@dataclass(frozen=True)
class BoxplotStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int


@dataclass(frozen=True)
class CellFailure:
    gamma: float
    theta: float
    n: int
    error: str


@dataclass
class ConsistencyDiagnostics:
    """Tail probabilities and plus-moments of ``|tau_hat - tau|`` per cell.

    ``cells[(gamma, theta, n)]`` maps to a dict with ``tail_prob`` and
    ``plus_moment`` (each keyed by epsilon) and ``rth_mean``.
    ``partial_tail_series[(gamma, theta, eps)]`` sums ``tail_prob`` over n.
    """

    epsilon_list: tuple[float, ...]
    r_diag: float
    cells: dict = field(default_factory=dict)
    partial_tail_series: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {}
        by_pair: dict = {}
        for (g, th, n), cell in sorted(self.cells.items()):
            by_pair.setdefault((g, th), []).append((n, cell))
        for (g, th), items in by_pair.items():
            ns = [n for n, _ in items]
            entry = {
                "n": ns,
                "tail_prob": {repr(e): [c["tail_prob"][e] for _, c in items] for e in self.epsilon_list},
                "plus_moment": {repr(e): [c["plus_moment"][e] for _, c in items] for e in self.epsilon_list},
                "rth_mean": [c["rth_mean"] for _, c in items],
                "partial_tail_series": {
                    repr(e): self.partial_tail_series[(g, th, e)] for e in self.epsilon_list
                },
            }
            out.setdefault(repr(g), {})[repr(th)] = entry
        return {"r_diag": self.r_diag, "epsilon_list": list(self.epsilon_list), "gamma": out}


@dataclass
class GridResult:
    records: list[ReplicationRecord]
    boxplots: dict
    diagnostics: ConsistencyDiagnostics
    failures: list[CellFailure]

    @property
    def violations(self) -> list[ReplicationRecord]:
        return [r for r in self.records if not r.bound_ok]


@functools.lru_cache(maxsize=16)
def noise_factor(n: int, sigma: float) -> np.ndarray:
    lower = cholesky_factor(build_sigma(CovarianceSpec(n, sigma)))
    lower.setflags(write=False)
    return lower


def run_replication(
    cfg: ExperimentConfig,
    gamma: float,
    theta: float,
    n: int,
    rep_index: int,
    *,
    noise_scale: float = 1.0,
    delta_sign: float = 1.0,
) -> ReplicationRecord:
    """One draw of the change-point experiment.

    ``noise_scale`` and ``delta_sign`` are test hooks: 0 removes the noise,
    -1 flips the direction of the shift.
    """
    gi, ti = cfg.stream_indices(gamma, theta)
    stream = derive_stream(cfg.base_seed, gi, ti, n, rep_index)
    noise = sample_row(noise_factor(n, cfg.sigma), stream)
    if noise_scale != 1.0:
        noise = noise * noise_scale
    model = ChangePointConfig(mu=cfg.mu, delta=delta_sign * float(n) ** theta, tau_star=cfg.tau_star)
    obs = generate_row(model, noise)
    profile = cusum_profile(obs.values, gamma)
    est = estimate(profile, n)
    lhs, rhs = deviation_bound_sides(model, n, gamma, profile)
    ok = lhs <= rhs
    if not ok:
        level = logging.WARNING if n >= BOUND_ENFORCED_FROM_N else logging.INFO
        log.log(level, "bound violation: gamma=%r theta=%r n=%d rep=%d seed=%d tau_star=%r "
                "delta=%r tau_hat=%r lhs=%r rhs=%r", gamma, theta, n, rep_index,
                cfg.base_seed, cfg.tau_star, model.delta, est.tau_hat, lhs, rhs)
    return ReplicationRecord(
        gamma=gamma, theta=theta, n=n, rep=rep_index, tau_hat=est.tau_hat, k_hat=est.k_hat,
        abs_err=abs(est.tau_hat - cfg.tau_star), bound_lhs=lhs, bound_rhs=rhs, bound_ok=ok,
    )


def boxplot_stats(values) -> BoxplotStats:
    """Five-number summary with linear interpolation at ``p * (count - 1)``."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise InvalidInputError("boxplot_stats needs at least one value")
    q = np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
    return BoxplotStats(*(float(x) for x in q), mean=float(np.mean(v)), count=int(v.size))


def consistency_diagnostics(records, epsilon_list, r_diag: float) -> ConsistencyDiagnostics:
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.gamma, rec.theta, rec.n), []).append(rec.abs_err)
    diag = ConsistencyDiagnostics(tuple(epsilon_list), float(r_diag))
    for key in sorted(groups):
        err = np.asarray(groups[key], dtype=np.float64)
        diag.cells[key] = {
            "tail_prob": {e: float(np.mean(err > e)) for e in diag.epsilon_list},
            "plus_moment": {
                e: float(np.mean(np.maximum(err - e, 0.0) ** diag.r_diag)) for e in diag.epsilon_list
            },
            "rth_mean": float(np.mean(err**diag.r_diag)),
        }
    for (g, th, _n), cell in diag.cells.items():
        for e in diag.epsilon_list:
            k = (g, th, e)
            diag.partial_tail_series[k] = diag.partial_tail_series.get(k, 0.0) + cell["tail_prob"][e]
    return diag


def _run_cell(cfg: ExperimentConfig, gamma: float, theta: float, n: int):
    try:
        return [run_replication(cfg, gamma, theta, n, rep) for rep in range(cfg.reps)], None
    except Exception as exc:  # one failed cell must not stop its siblings
        log.error("cell gamma=%r theta=%r n=%d failed: %s", gamma, theta, n, exc)
        return [], CellFailure(gamma, theta, n, f"{type(exc).__name__}: {exc}")


def run_grid(cfg: ExperimentConfig, threads: int = 1) -> GridResult:
    cells = [(g, th, n) for g, th, _, _ in cfg.cells() for n in cfg.n_grid]
    for n in cfg.n_grid:
        try:
            noise_factor(n, cfg.sigma)
        except Exception:
            pass  # reported per cell below
    if threads <= 1:
        outcomes = [_run_cell(cfg, *c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda c: _run_cell(cfg, *c), cells))

    records = sorted((r for recs, _ in outcomes for r in recs), key=ReplicationRecord.sort_key)
    failures = [f for _, f in outcomes if f is not None]

    by_cell: dict = {}
    for r in records:
        by_cell.setdefault((r.gamma, r.theta, r.n), []).append(r.tau_hat)
    boxplots = {k: boxplot_stats(v) for k, v in sorted(by_cell.items())}
    diagnostics = consistency_diagnostics(records, cfg.epsilon_list, cfg.r_diag)
    return GridResult(records, boxplots, diagnostics, failures)


def fmt(x) -> str:
    """17 significant digits for floats; ints and bools as integers."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_FIELDS)
        for r in records:
            w.writerow([fmt(getattr(r, f)) for f in RECORD_FIELDS])


def write_boxplot_csv(boxplots: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BOXPLOT_FIELDS)
        for (g, th, n), s in sorted(boxplots.items()):
            w.writerow([fmt(g), fmt(th), fmt(n)] + [fmt(getattr(s, f)) for f in BOXPLOT_FIELDS[3:]])


def _round(x, digits=6):
    if isinstance(x, float) and math.isfinite(x):
        return round(x, digits)
    return x


def summary(result: GridResult, cfg: ExperimentConfig) -> dict:
    cells = []
    for (g, th, n), s in sorted(result.boxplots.items()):
        diag = result.diagnostics.cells[(g, th, n)]
        errs = [r.abs_err for r in result.records if (r.gamma, r.theta, r.n) == (g, th, n)]
        cells.append({
            "gamma": g, "theta": th, "n": n,
            "median_tau_hat": _round(s.median),
            "median_abs_err": _round(float(np.median(errs))),
            "tail_prob": {repr(e): _round(p) for e, p in diag["tail_prob"].items()},
        })
    big = [r for r in result.records if r.n >= BOUND_ENFORCED_FROM_N]
    return {
        "reps": cfg.reps,
        "base_seed": cfg.base_seed,
        "records": len(result.records),
        "cells": cells,
        "bound_violations": len(result.violations),
        "bound_ok_fraction_n_ge_500": _round(
            sum(r.bound_ok for r in big) / len(big) if big else 1.0
        ),
        "failures": [asdict(f) for f in result.failures],
    }


def write_outputs(result: GridResult, cfg: ExperimentConfig, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_records_csv(result.records, out / "records.csv")
    write_boxplot_csv(result.boxplots, out / "boxplot.csv")
    write_records_csv(result.violations, out / "bound_violations.csv")
    (out / "diagnostics.json").write_text(json.dumps(result.diagnostics.to_json(), indent=2) + "\n")
    (out / "summary.json").write_text(json.dumps(summary(result, cfg), indent=2) + "\n")
    (out / "config.txt").write_text(format_config(cfg))

"""Monte Carlo check of the exponential maximal inequality for m-NA rows.

For rows of ``m``-negatively associated variables truncated at ``ell``, and
any ``x, a > 0``::

    P{max_i |sum_{j<=i} (g(X_j) - E g(X_j))| >= x}
        <= 2m P{max_j |g(X_j) - E g(X_j)| > a} + 8m (2m s / (3 x a))**(x / (12 m a))

where ``g`` clamps to ``[-ell, ell]`` and ``s`` is the summed variance of the
truncated coordinates. The tighter intermediate form
``8m (1 + 3xa / (2ms))**(-x / (12 m a))`` is reported alongside.

Truncated means and ``s`` come from a pilot sample drawn on its own stream,
so the main sample is not reused to centre itself.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateProbeError, InvalidInputError
from .gaussian import CovarianceSpec, build_sigma, cholesky_factor, sample_rows
from .streams import Stream, seed_stream
from .truncation import TruncationLevel, max_abs_centered_partial_sums, truncated_variance_sum

Sampler = Callable[[Stream, int], np.ndarray]

MIN_REPS = 10_000


@dataclass(frozen=True)
class InequalityParams:
    m: int
    x: float
    a: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidInputError("m must be a positive integer")
        if not (self.x > 0 and self.a > 0):
            raise InvalidInputError("x and a must be positive")

    @property
    def alpha(self) -> float:
        return 2.0 * self.m

    @property
    def beta(self) -> float:
        return 8.0 * self.m

    @property
    def c1(self) -> float:
        return 1.0 / (12.0 * self.m)

    @property
    def c2(self) -> float:
        return 1.0 / (8.0 * self.m**2)

    @property
    def exponent(self) -> float:
        return self.x / (12.0 * self.m * self.a)


def power_term(params: InequalityParams, s: float) -> float:
    """``beta * (2m s / (3 x a))**(x / (12 m a))``."""
    m, x, a = params.m, params.x, params.a
    return params.beta * (2.0 * m * s / (3.0 * x * a)) ** params.exponent


def tight_power_term(params: InequalityParams, s: float) -> float:
    m, x, a = params.m, params.x, params.a
    return params.beta * (1.0 + 3.0 * x * a / (2.0 * m * s)) ** (-params.exponent)


def template_power_term(params: InequalityParams, s: float) -> float:
    """General template ``beta * (s / (C2 * lam * eta))**(lam / eta)``.

    With ``lam = x`` and ``eta = 12 m a`` this equals ``power_term``.
    """
    lam, eta = params.x, 12.0 * params.m * params.a
    return params.beta * (s / (params.c2 * lam * eta)) ** (lam / eta)


@dataclass(frozen=True)
class ProbeReport:
    n: int
    level: float
    m: int
    x: float
    a: float
    reps: int
    lhs: float
    lhs_stderr: float
    tail_term: float
    tail_stderr: float
    power_term: float
    power_stderr: float
    tight_power_term: float
    s_hat: float
    s_stderr: float

    @property
    def rhs(self) -> float:
        return self.tail_term + self.power_term

    @property
    def rhs_stderr(self) -> float:
        return self.tail_stderr + self.power_stderr

    @property
    def margin(self) -> float:
        """``rhs + 3 (se_lhs + se_rhs) - lhs``; non-negative means no violation."""
        return self.rhs + 3.0 * (self.lhs_stderr + self.rhs_stderr) - self.lhs

    @property
    def holds(self) -> bool:
        return self.margin >= 0.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(rhs=self.rhs, rhs_stderr=self.rhs_stderr, margin=self.margin, holds=self.holds)
        return out


def gaussian_sampler(n: int, sigma: float = 2.0) -> Sampler:
    """Rows from the negatively associated Gaussian construction."""
    factor = cholesky_factor(build_sigma(CovarianceSpec(n, sigma)))
    return lambda stream, count: sample_rows(factor, stream, count)


def _binomial_se(p: float, reps: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / reps)


def probe_exponential_inequality(
    params: InequalityParams,
    sampler: Sampler,
    level,
    reps: int,
    seed: int,
    *,
    min_reps: int = MIN_REPS,
) -> ProbeReport:
    """Estimate both sides of the inequality from ``reps`` sampled rows.

    ``seed`` drives two independent streams: channel 1 for the pilot sample
    (means and ``s``), channel 2 for the probe sample.
    """
    ell = float(TruncationLevel(float(level)))
    if reps < min_reps:
        raise InvalidInputError(f"reps must be at least {min_reps}, got {reps}")

    pilot = np.asarray(sampler(seed_stream(seed, 1), reps), dtype=np.float64)
    g_pilot = np.clip(pilot, -ell, ell)
    means = g_pilot.mean(axis=0)
    s_hat = truncated_variance_sum(pilot, ell)
    if s_hat <= 0.0:
        raise DegenerateProbeError("estimated truncated variance sum is zero")
    # per-realization contributions to s_hat give its standard error
    w = np.sum((g_pilot - means) ** 2, axis=1) * (reps / (reps - 1.0))
    s_se = float(np.std(w, ddof=1) / math.sqrt(reps))

    rows = np.asarray(sampler(seed_stream(seed, 2), reps), dtype=np.float64)
    g = np.clip(rows, -ell, ell)
    max_partial = max_abs_centered_partial_sums(g, means, ell)
    lhs = float(np.mean(max_partial >= params.x))
    tail = float(np.mean(np.max(np.abs(g - means), axis=1) > params.a))

    pw = power_term(params, s_hat)
    return ProbeReport(
        n=rows.shape[1],
        level=ell,
        m=params.m,
        x=params.x,
        a=params.a,
        reps=reps,
        lhs=lhs,
        lhs_stderr=_binomial_se(lhs, reps),
        tail_term=params.alpha * tail,
        tail_stderr=params.alpha * _binomial_se(tail, reps),
        power_term=pw,
        # delta method: d(pw)/ds = pw * exponent / s
        power_stderr=pw * params.exponent / s_hat * s_se,
        tight_power_term=tight_power_term(params, s_hat),
        s_hat=s_hat,
        s_stderr=s_se,
    )

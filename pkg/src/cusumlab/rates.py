"""Rate conditions on the shift size ``delta_n = n**theta``.

Complete consistency of the CUSUM location estimator needs certain series in
``n`` to converge. With ``delta_n = n**theta`` each summand is a sum of
``n**e * log(n)**b`` pieces, so convergence reduces to exponent comparisons.
Boundary cases (exponent exactly -1) are classed as divergent.

Two condition families are available through ``condition=``:

``"moment"``
    The conditions for ``sup E|X|**r < inf``: a one-term family when
    ``1 < r <= 2`` and a two-term family when ``r > 2``.
``"bounded_shift"``
    The reduced family for ``r > 2`` that applies when the shift stays
    bounded (``theta <= 0``).
"""

from __future__ import annotations

import functools
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInputError


class Regime(str, Enum):
    G_LT_1_OVER_R = "g_lt_1_over_r"
    G_EQ_1_OVER_R = "g_eq_1_over_r"
    R_INV_LT_G_LT_HALF = "r_inv_lt_g_lt_half"
    G_EQ_HALF = "g_eq_half"
    G_GT_HALF = "g_gt_half"


_TIE_TOL = 1e-12


@dataclass(frozen=True)
class RateParams:
    r: float
    gamma: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 1.0):
            raise InvalidInputError(f"moment order r must exceed 1, got {self.r!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise InvalidInputError(f"gamma must lie in [0, 1), got {self.gamma!r}")
        if not math.isfinite(self.theta):
            raise InvalidInputError("theta must be finite")


@dataclass(frozen=True)
class SeriesVerdict:
    converges: bool
    binding_regime: Regime
    threshold_theta: float

    def to_dict(self) -> dict:
        return {
            "converges": self.converges,
            "regime": self.binding_regime.value,
            "threshold_theta": self.threshold_theta,
        }


def _tie(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=_TIE_TOL)


def regime_of(r: float, gamma: float) -> Regime:
    inv_r = 1.0 / r
    if _tie(gamma, inv_r):
        return Regime.G_EQ_1_OVER_R
    if gamma < inv_r:
        return Regime.G_LT_1_OVER_R
    if r <= 2.0:
        # 1/r >= 1/2 here, so the only remaining band is above 1/2
        return Regime.G_GT_HALF
    if _tie(gamma, 0.5):
        return Regime.G_EQ_HALF
    return Regime.R_INV_LT_G_LT_HALF if gamma < 0.5 else Regime.G_GT_HALF


def threshold_theta(r: float, gamma: float) -> float:
    """Infimum of the ``theta`` values for which the moment series converge."""
    regime = regime_of(r, gamma)
    if r <= 2.0:
        if regime in (Regime.G_LT_1_OVER_R, Regime.G_EQ_1_OVER_R):
            return (2.0 - r) / r
        return gamma - 1.0 + 1.0 / r
    if regime in (Regime.G_LT_1_OVER_R, Regime.G_EQ_1_OVER_R):
        return (2.0 - r) / (2.0 * r - 2.0)
    if regime is Regime.R_INV_LT_G_LT_HALF:
        return 1.0 / (2.0 * r - 2.0 * r * gamma) - 0.5
    if regime is Regime.G_EQ_HALF:
        return (2.0 - r) / (2.0 * r)
    return gamma - 1.0 + 1.0 / r


def classify_rate(p: RateParams) -> SeriesVerdict:
    """Strict-inequality verdict; ``theta`` equal to the threshold diverges."""
    thr = threshold_theta(p.r, p.gamma)
    return SeriesVerdict(p.theta > thr, regime_of(p.r, p.gamma), thr)


def admissible_shift(gamma: float, theta: float) -> bool:
    """Whether some finite ``r > 2`` makes the moment series converge.

    Gaussian noise has every moment, so this is the relevant check for the
    simulated arrays. Thresholds fall monotonically in ``r`` towards -1/2
    (``gamma <= 1/2``) or ``gamma - 1`` (``gamma > 1/2``) without reaching them.
    """
    if not 0.0 <= gamma < 1.0:
        raise InvalidInputError(f"gamma must lie in [0, 1), got {gamma!r}")
    limit = -0.5 if gamma <= 0.5 else gamma - 1.0
    return theta > limit


def minimal_moment_order(gamma: float, theta: float, r_max: float = 1e6) -> float | None:
    """Smallest ``r > 2`` (to 1e-9) with a convergent verdict, or None."""
    if not admissible_shift(gamma, theta):
        return None
    if classify_rate(RateParams(2.0 + 1e-12, gamma, theta)).converges:
        return 2.0
    lo, hi = 2.0, 4.0
    while not classify_rate(RateParams(hi, gamma, theta)).converges:
        lo, hi = hi, hi * 2.0
        if hi > r_max:
            return None
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if classify_rate(RateParams(mid, gamma, theta)).converges:
            hi = mid
        else:
            lo = mid
    return hi


def term_components(p: RateParams, condition: str = "moment") -> list[tuple[float, float]]:
    """The summand as a list of ``(exponent, log_power)`` pairs.

    Each pair stands for ``n**exponent * log(n)**log_power``.
    """
    r, g, th = p.r, p.gamma, p.theta
    regime = regime_of(r, g)
    if condition == "moment":
        if r <= 2.0:
            if regime is Regime.G_LT_1_OVER_R:
                return [(1.0 - r - r * th, 0.0)]
            if regime is Regime.G_EQ_1_OVER_R:
                return [(1.0 - r - r * th, 1.0)]
            return [(r * (g - 1.0) - r * th, 0.0)]
        if regime is Regime.G_LT_1_OVER_R:
            return [(1.0 - r - r * th, 0.0), ((1.0 - r) * (2.0 * th + 1.0), 0.0)]
        if regime is Regime.G_EQ_1_OVER_R:
            return [(1.0 - r - r * th, 1.0), ((1.0 - r) * (2.0 * th + 1.0), 0.0)]
        if regime is Regime.R_INV_LT_G_LT_HALF:
            return [(r * (g - th - 1.0), 0.0), (r * (g - 1.0) * (2.0 * th + 1.0), 0.0)]
        if regime is Regime.G_EQ_HALF:
            return [(-r * (th + 0.5), 0.0), ((1.0 - r) * (2.0 * th + 1.0), r - 1.0)]
        return [(r * (g - th - 1.0), 0.0)]
    if condition == "bounded_shift":
        if r <= 2.0:
            raise InvalidInputError("the bounded-shift family is stated for r > 2")
        if regime is Regime.G_LT_1_OVER_R:
            return [((1.0 - r) * (2.0 * th + 1.0), 0.0)]
        if regime is Regime.G_EQ_1_OVER_R:
            return [((1.0 - r) * (2.0 * th + 1.0), 1.0)]
        if regime is Regime.R_INV_LT_G_LT_HALF:
            return [(r * (g - 1.0) * (2.0 * th + 1.0), 0.0)]
        if regime is Regime.G_EQ_HALF:
            return [(2.0 * th * (1.0 - r) - r / 2.0, 0.0)]
        return [(r * (g - th - 1.0), 0.0)]
    raise InvalidInputError(f"unknown condition family {condition!r}")


def series_terms(p: RateParams, n, condition: str = "moment"):
    """Summand of the rate series at ``n`` (scalar or array, ``n >= 2``)."""
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < 2):
        raise InvalidInputError("series terms are evaluated for n >= 2")
    log_n = np.log(n_arr)
    total = np.zeros_like(n_arr)
    for expo, log_pow in term_components(p, condition):
        piece = np.exp(expo * log_n)
        if log_pow:
            piece = piece * log_n**log_pow
        total = total + piece
    return float(total) if total.ndim == 0 else total


def power_sum_bound(n: int, s: float) -> float:
    """Exact ``sum_{j=1}^n j**(-s)``; compare with ``power_sum_constant``."""
    if int(n) != n or n < 1:
        raise InvalidInputError("n must be a positive integer")
    if not s > 0:
        raise InvalidInputError("s must be positive")
    j = np.arange(1, int(n) + 1, dtype=np.float64)
    # reverse order: small terms first
    return float(np.sum(j[::-1] ** (-s)))


def power_sum_constant(s: float) -> float:
    """Explicit constant for the growth shape of ``power_sum_bound``.

    ``s < 1``: sum <= C n**(1-s) with C = 1/(1-s) + 1; ``s == 1``:
    sum <= C log n for n >= 3 with C = 2; ``s > 1``: sum <= C = s/(s-1).
    """
    if s < 1.0:
        return 1.0 / (1.0 - s) + 1.0
    if s == 1.0:
        return 2.0
    return s / (s - 1.0)


def power_sum_envelope(n: int, s: float) -> float:
    c = power_sum_constant(s)
    if s < 1.0:
        return c * n ** (1.0 - s)
    if s == 1.0:
        return c * math.log(n) if n >= 2 else 1.0
    return c


def partial_sums(term: Callable[[np.ndarray], np.ndarray], N: int) -> tuple[float, float]:
    """``S(N) = sum_{n=2}^N term(n)`` and the ratio ``S(N) / S(N // 2)``.

    Overflow reports ``inf`` for both values.
    """
    if int(N) != N or N < 100:
        raise InvalidInputError("N must be an integer >= 100")
    n = np.arange(2, int(N) + 1, dtype=np.float64)
    with np.errstate(over="ignore", invalid="ignore"):
        t = np.asarray(term(n), dtype=np.float64)
        half = int(N) // 2 - 1  # terms with n <= N // 2
        s_half = float(np.sum(t[:half]))
        s_full = s_half + float(np.sum(t[half:]))
    if not (math.isfinite(s_full) and math.isfinite(s_half)) or s_half == 0.0:
        return math.inf, math.inf
    return s_full, s_full / s_half


def partial_sum_diagnostic(p: RateParams, N: int, condition: str = "moment") -> tuple[float, float]:
    return partial_sums(lambda n: series_terms(p, n, condition), N)


@functools.lru_cache(maxsize=64)
def critical_tail_ratio(N: int, log_power: float = 0.0) -> float:
    """Tail ratio of ``sum n**-1 * log(n)**log_power`` over the same range.

    For fixed ``log_power`` the tail ratio of ``n**e * log(n)**log_power``
    rises strictly with ``e``, so a piece converges exactly when its ratio
    sits below this boundary reference.
    """
    if log_power:
        return partial_sums(lambda n: np.log(n) ** log_power / n, N)[1]
    return partial_sums(lambda n: 1.0 / n, N)[1]


def numeric_verdict(p: RateParams, N: int = 10**6, condition: str = "moment") -> bool:
    """Convergence judged from partial sums of each summand piece.

    A sum of non-negative pieces converges iff every piece does; testing
    pieces separately keeps a slowly converging log-weighted piece from
    masking a divergent one at finite ``N``.
    """
    for expo, log_pow in term_components(p, condition):
        if log_pow:
            piece = lambda n, e=expo, b=log_pow: np.exp(e * np.log(n)) * np.log(n) ** b
        else:
            piece = lambda n, e=expo: np.exp(e * np.log(n))
        if not partial_sums(piece, N)[1] < critical_tail_ratio(N, log_pow):
            return False
    return True

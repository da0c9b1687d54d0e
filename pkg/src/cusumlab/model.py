"""Mean-shift observations ``Y = mean + noise`` with one change index."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateConfigError, InvalidInputError

# mu(n, k) with k a 1-based index array; returns the baseline means.
MeanFunction = Callable[[int, np.ndarray], np.ndarray]


def change_index(n: int, tau_star: float) -> int:
    """``floor(n * tau_star)``; rejects indices that empty a segment."""
    if int(n) != n or n < 2:
        raise InvalidInputError(f"n must be an integer >= 2, got {n!r}")
    if not 0.0 < tau_star < 1.0:
        raise InvalidInputError(f"tau_star must lie in (0, 1), got {tau_star!r}")
    k_star = math.floor(n * tau_star)
    if k_star <= 0 or k_star >= n:
        raise DegenerateConfigError(f"n={n}, tau_star={tau_star} gives k*={k_star}")
    return k_star


@dataclass(frozen=True)
class ChangePointConfig:
    """Baseline ``mu``, shift ``delta`` and fractional location ``tau_star``.

    ``mu`` is a constant; ``mu_fn`` overrides it with index-dependent means.
    A zero shift is only accepted with ``diagnostic=True``.
    """

    mu: float = 1.0
    delta: float = 1.0
    tau_star: float = 0.5
    mu_fn: MeanFunction | None = None
    diagnostic: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau_star < 1.0:
            raise InvalidInputError(f"tau_star must lie in (0, 1), got {self.tau_star!r}")
        if not math.isfinite(self.delta) or not math.isfinite(self.mu):
            raise InvalidInputError("mu and delta must be finite")
        if self.delta == 0.0 and not self.diagnostic:
            raise InvalidInputError("delta = 0 is only allowed in diagnostic mode")

    def baseline(self, n: int) -> np.ndarray:
        if self.mu_fn is None:
            return np.full(n, float(self.mu))
        base = np.asarray(self.mu_fn(n, np.arange(1, n + 1)), dtype=np.float64)
        if base.shape != (n,):
            raise InvalidInputError("mu_fn must return one mean per index")
        return base


@dataclass(frozen=True)
class ObservationRow:
    values: np.ndarray
    k_star: int


def mean_vector(cfg: ChangePointConfig, n: int) -> np.ndarray:
    k_star = change_index(n, cfg.tau_star)
    means = cfg.baseline(n)
    means[k_star:] += cfg.delta
    return means


def generate_row(cfg: ChangePointConfig, noise) -> ObservationRow:
    noise = np.asarray(noise, dtype=np.float64)
    if noise.ndim != 1:
        raise InvalidInputError("noise must be a 1-D row")
    n = noise.shape[0]
    return ObservationRow(mean_vector(cfg, n) + noise, change_index(n, cfg.tau_star))

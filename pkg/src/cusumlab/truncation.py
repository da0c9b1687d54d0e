"""Truncation at a level and the centered partial-sum statistics built on it.

Row-level functions take a 1-D row; the statistic helpers also accept a 2-D
array of rows (one row per realization, coordinates along the last axis).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError


@dataclass(frozen=True)
class TruncationLevel:
    level: float

    def __post_init__(self):
        if not (math.isfinite(self.level) and self.level > 0):
            raise InvalidInputError(f"truncation level must be positive and finite, got {self.level!r}")

    def __float__(self):
        return float(self.level)


@dataclass(frozen=True)
class TailSplit:
    """``x`` split at threshold ``t`` into a bounded core and a saturated tail."""

    bounded_part: float
    tail_part: float
    threshold: float


def _level(level) -> float:
    value = float(level)
    if not (math.isfinite(value) and value > 0):
        raise InvalidInputError(f"threshold must be positive and finite, got {level!r}")
    return value


def _finite(x) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"sample value must be finite, got {x!r}")
    return x


def as_row(values) -> np.ndarray:
    row = np.asarray(values, dtype=np.float64)
    if row.ndim != 1 or row.size < 1:
        raise InvalidInputError("a sample row must be a non-empty 1-D vector")
    if not np.all(np.isfinite(row)):
        raise InvalidInputError("sample row contains non-finite entries")
    return row


def truncate(x: float, level) -> float:
    """Clamp ``x`` to ``[-level, level]``."""
    ell = _level(level)
    return min(max(_finite(x), -ell), ell)


def truncate_array(values, level) -> np.ndarray:
    ell = _level(level)
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("sample values must be finite")
    return np.clip(values, -ell, ell)


def split_tail(x: float, t) -> TailSplit:
    """Values with ``|x| <= t`` go wholly to the bounded part."""
    t = _level(t)
    x = _finite(x)
    if abs(x) <= t:
        return TailSplit(x, 0.0, t)
    return TailSplit(0.0, t if x > t else -t, t)


def max_abs_centered_partial_sums(row, truncated_means, t) -> float | np.ndarray:
    """``max_i |sum_{j<=i} (x_j - m_j)|`` with caller-supplied centering ``m``.

    ``t`` only names the truncation level the means belong to. A 2-D ``row``
    is treated as a stack of rows and gives one maximum per row.
    """
    _level(t)
    x = np.asarray(row, dtype=np.float64)
    m = np.asarray(truncated_means, dtype=np.float64)
    if x.ndim == 1:
        x = as_row(x)
    elif x.ndim != 2 or x.shape[-1] < 1 or not np.all(np.isfinite(x)):
        raise InvalidInputError("rows must be a finite 1-D or 2-D array")
    if m.shape != (x.shape[-1],):
        raise InvalidInputError(
            f"truncated_means has shape {m.shape}, expected ({x.shape[-1]},)"
        )
    stat = np.max(np.abs(np.cumsum(x - m, axis=-1)), axis=-1)
    return float(stat) if stat.ndim == 0 else stat


def all_within(row, t) -> bool:
    """True when the row is untouched by truncation at ``t``."""
    t = _level(t)
    return bool(np.max(np.abs(as_row(row))) <= t)


def truncated_variance_sum(rows, level) -> float:
    """Sum over coordinates of the sample variance of the truncated values.

    ``rows`` holds one realization per row. The divisor is ``reps - 1``.
    """
    ell = _level(level)
    data = np.asarray(rows, dtype=np.float64)
    if data.ndim != 2:
        raise InvalidInputError("expected a 2-D array of realizations")
    if data.shape[0] < 2:
        raise InsufficientDataError("need at least two realizations to estimate a variance")
    if data.shape[1] < 1 or not np.all(np.isfinite(data)):
        raise InvalidInputError("realizations must be finite and non-empty")
    g = np.clip(data, -ell, ell)
    return float(np.sum(np.var(g, axis=0, ddof=1)))

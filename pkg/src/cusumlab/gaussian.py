"""Negatively associated Gaussian rows.

The row covariance has diagonal ``j/n + j*sigma**(-n-j)/(sigma-1)`` and
off-diagonal entries ``-sigma**(-n-i-j)`` (1-based ``i, j``). All
off-diagonals are negative, so a Gaussian vector with this covariance is
negatively associated. Powers of ``sigma`` are formed as
``exp(-(n+i+j) * log(sigma))`` and underflow to zero for large ``n``, which
leaves the matrix numerically diagonal.

The interior off-diagonal pattern is read off the four corner entries that
are displayed for the matrix; it is not stated separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import DomainError, FactorizationError, InvalidInputError
from .special import gamma_fn
from .streams import Stream

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class CovarianceSpec:
    n: int
    sigma: float = 2.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 1.0):
            raise InvalidInputError(f"sigma must be finite and > 1, got {self.sigma!r}")


def _marginal_variances(n: int, sigma: float) -> np.ndarray:
    j = np.arange(1, n + 1, dtype=np.float64)
    return j / n + j * np.exp(-(n + j) * math.log(sigma)) / (sigma - 1.0)


def marginal_variance(spec: CovarianceSpec, j: int) -> float:
    """Variance of coordinate ``j`` (1-based); equals the diagonal of build_sigma."""
    if int(j) != j or not 1 <= j <= spec.n:
        raise InvalidInputError(f"index j={j!r} outside 1..{spec.n}")
    return float(_marginal_variances(spec.n, spec.sigma)[int(j) - 1])


def marginal_variances(spec: CovarianceSpec) -> np.ndarray:
    return _marginal_variances(spec.n, spec.sigma)


def build_sigma(spec: CovarianceSpec) -> np.ndarray:
    n, log_sigma = spec.n, math.log(spec.sigma)
    idx = np.arange(1, n + 1, dtype=np.float64)
    cov = -np.exp(-(n + idx[:, None] + idx[None, :]) * log_sigma)
    np.fill_diagonal(cov, _marginal_variances(n, spec.sigma))
    return cov


def cholesky_factor(cov) -> np.ndarray:
    """Lower Cholesky factor ``L`` with ``L @ L.T == cov``.

    Raises FactorizationError carrying the 1-based index of the first
    non-positive pivot. No jitter is added.
    """
    cov = np.asarray(cov, dtype=np.float64)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] == 0:
        raise InvalidInputError("covariance must be a non-empty square matrix")
    if not np.all(np.isfinite(cov)):
        raise InvalidInputError("covariance has non-finite entries")
    asym = float(np.max(np.abs(cov - cov.T)))
    if asym > SYMMETRY_TOL:
        raise InvalidInputError(f"covariance is not symmetric (max asymmetry {asym:.3g})")
    lower, info = lapack.dpotrf(cov, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise FactorizationError(int(info))
    if info < 0:
        raise InvalidInputError(f"dpotrf rejected argument {-info}")
    return lower


def reconstruction_error(lower, cov) -> float:
    """Relative Frobenius error of ``lower @ lower.T`` against ``cov``."""
    cov = np.asarray(cov, dtype=np.float64)
    diff = np.linalg.norm(lower @ lower.T - cov, "fro")
    return float(diff / np.linalg.norm(cov, "fro"))


def sample_row(factor, stream: Stream) -> np.ndarray:
    """One row ``factor @ z`` with ``z`` standard normal from ``stream``."""
    factor = np.asarray(factor)
    return factor @ stream.normals(factor.shape[0])


def sample_rows(factor, stream: Stream, count: int) -> np.ndarray:
    """``count`` rows stacked along axis 0, drawn in row-major order."""
    factor = np.asarray(factor)
    z = stream.normals(count * factor.shape[0]).reshape(count, factor.shape[0])
    return z @ factor.T


def abs_moment(r: float, variance: float) -> float:
    """``E|X|**r`` for ``X ~ N(0, variance)``.

    Even integer orders use the exact double factorial so that
    ``abs_moment(2, v) == v`` holds bit for bit.
    """
    r, variance = float(r), float(variance)
    if not (math.isfinite(r) and r > 0):
        raise InvalidInputError(f"moment order must be positive, got {r!r}")
    if not math.isfinite(variance) or variance < 0:
        raise InvalidInputError(f"variance must be non-negative, got {variance!r}")
    if variance == 0.0:
        return 0.0
    if r == int(r) and int(r) % 2 == 0:
        k = int(r) // 2
        coef = 1.0
        for odd in range(1, 2 * k, 2):
            coef *= odd
        return coef * variance**k
    half = (r + 1.0) / 2.0
    if half > 50.0:
        raise DomainError(f"moment order {r} beyond supported range")
    return 2.0 ** (r / 2.0) / math.sqrt(math.pi) * gamma_fn(half) * variance ** (r / 2.0)

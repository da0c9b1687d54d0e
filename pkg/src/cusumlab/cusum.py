"""Weighted CUSUM profile and the change-point estimator.

For ``k = 1..n-1``::

    U[k] = a[k] * sum(Y[:k]) - b[k] * sum(Y[k:])
    a[k] = (n-k)**(1-g) / (n**(1-g) * k**g)
    b[k] = k**(1-g) / (n**(1-g) * (n-k)**g)

with weight exponent ``g`` in [0, 1). Since ``a[k]*k == b[k]*(n-k)``, adding a
constant to every observation leaves the profile unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundUndefinedError, InvalidInputError
from .model import ChangePointConfig, change_index


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise InvalidInputError(f"gamma must lie in [0, 1), got {gamma!r}")
    return gamma


@dataclass(frozen=True)
class CusumParams:
    gamma: float = 0.0

    def __post_init__(self):
        _check_gamma(self.gamma)


@dataclass(frozen=True)
class Estimate:
    k_hat: int
    tau_hat: float


def _gamma_of(params) -> float:
    return _check_gamma(params.gamma if isinstance(params, CusumParams) else params)


def cusum_weights(n: int, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Prefix weights ``a`` and suffix weights ``b`` for ``k = 1..n-1``."""
    k = np.arange(1, n, dtype=np.float64)
    log_k, log_rest, log_n = np.log(k), np.log(n - k), math.log(n)
    a = np.exp((1.0 - gamma) * (log_rest - log_n) - gamma * log_k)
    b = np.exp((1.0 - gamma) * (log_k - log_n) - gamma * log_rest)
    return a, b


def cusum_profile(y, params) -> np.ndarray:
    """Profile ``U[1..n-1]`` (stored 0-based) in one prefix-sum pass."""
    gamma = _gamma_of(params)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] < 2:
        raise InvalidInputError("cusum_profile needs a 1-D series of length >= 2")
    if not np.all(np.isfinite(y)):
        raise InvalidInputError("series contains non-finite values")
    n = y.shape[0]
    prefix = np.cumsum(y)
    head = prefix[:-1]
    tail = prefix[-1] - head
    a, b = cusum_weights(n, gamma)
    return a * head - b * tail


def expected_profile(cfg: ChangePointConfig, n: int, params) -> np.ndarray:
    """Noise-free profile, from the piecewise closed form.

    For ``k <= k*`` it is ``-b[k] * delta * (n - k*)``; past the change it is
    ``delta * (a[k] * (k - k*) - b[k] * (n - k))``. Index-dependent baselines
    add their own profile, since only constant means cancel.
    """
    gamma = _gamma_of(params)
    k_star = change_index(n, cfg.tau_star)
    a, b = cusum_weights(n, gamma)
    k = np.arange(1, n, dtype=np.float64)
    out = np.where(
        k <= k_star,
        -b * cfg.delta * (n - k_star),
        cfg.delta * (a * (k - k_star) - b * (n - k)),
    )
    if cfg.mu_fn is not None:
        out = out + cusum_profile(cfg.baseline(n), gamma)
    return out


def estimate(profile, n: int) -> Estimate:
    """Smallest ``k`` attaining ``max |U|``; exact float comparison for ties."""
    u = np.asarray(profile, dtype=np.float64)
    if u.ndim != 1 or u.size == 0:
        raise InvalidInputError("profile is empty")
    if u.shape[0] != n - 1:
        raise InvalidInputError(f"profile length {u.shape[0]} does not match n-1 = {n - 1}")
    k_hat = int(np.argmax(np.abs(u))) + 1  # argmax returns the first maximizer
    return Estimate(k_hat, k_hat / n)


def bound_constant(gamma: float, tau_star: float) -> float:
    """``(1-g) * tau**(-g) * (1-tau) * min(tau, 1-tau)``."""
    return (1.0 - gamma) * tau_star ** (-gamma) * (1.0 - tau_star) * min(tau_star, 1.0 - tau_star)


def deviation_bound_sides(cfg: ChangePointConfig, n: int, params, profile) -> tuple[float, float]:
    """Both sides of the location-error bound for one observed profile.

    ``lhs = |delta| * C(g, tau) * |tau - tau_hat|`` and
    ``rhs = 2 * n**(g-1) * max_k |U[k] - E U[k]|``. The caller decides what
    to do with ``lhs > rhs``.
    """
    gamma = _gamma_of(params)
    if cfg.delta == 0.0:
        raise BoundUndefinedError("the deviation bound needs a non-zero shift")
    u = np.asarray(profile, dtype=np.float64)
    est = estimate(u, n)
    lhs = abs(cfg.delta) * bound_constant(gamma, cfg.tau_star) * abs(cfg.tau_star - est.tau_hat)
    rhs = 2.0 * n ** (gamma - 1.0) * float(np.max(np.abs(u - expected_profile(cfg, n, gamma))))
    return lhs, rhs

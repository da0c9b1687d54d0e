import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cusumlab.cusum import (
    CusumParams,
    bound_constant,
    cusum_profile,
    deviation_bound_sides,
    estimate,
    expected_profile,
)
from cusumlab.errors import BoundUndefinedError, InvalidInputError
from cusumlab.model import ChangePointConfig, mean_vector

gammas = st.sampled_from([0.0, 0.1, 0.3, 0.5, 0.7, 0.9])
series = arrays(np.float64, st.integers(2, 80), elements=st.floats(-100, 100))


def direct_profile(y, gamma):
    """Term-by-term evaluation, one k at a time."""
    n = len(y)
    out = []
    for k in range(1, n):
        a = (n - k) ** (1 - gamma) / (n ** (1 - gamma) * k**gamma)
        b = k ** (1 - gamma) / (n ** (1 - gamma) * (n - k) ** gamma)
        out.append(a * sum(y[:k]) - b * sum(y[k:]))
    return np.array(out)


def test_profile_examples():
    assert np.array_equal(cusum_profile(np.zeros(4), 0.3), np.zeros(3))
    assert cusum_profile([3.0, -1.0], 0.0)[0] == (3.0 - -1.0) / 2
    assert cusum_profile([1.0, 1.0, 3.0, 3.0], CusumParams(0.5))[1] == pytest.approx(-2.0, abs=1e-15)


@given(series, gammas)
def test_profile_matches_direct_sum(y, gamma):
    np.testing.assert_allclose(cusum_profile(y, gamma), direct_profile(y, gamma), rtol=1e-9, atol=1e-9)


def test_profile_validation():
    with pytest.raises(InvalidInputError):
        cusum_profile([1.0], 0.0)
    with pytest.raises(InvalidInputError):
        cusum_profile([1.0, 2.0], 1.0)
    with pytest.raises(InvalidInputError):
        CusumParams(-0.1)


@given(series, gammas, st.floats(-50, 50))
def test_shift_invariance(y, gamma, c):
    assert np.max(np.abs(cusum_profile(y + c, gamma) - cusum_profile(y, gamma))) <= 1e-9


@given(series, gammas, st.floats(0.01, 100))
def test_scale_equivariance(y, gamma, c):
    u = cusum_profile(y, gamma)
    np.testing.assert_allclose(cusum_profile(c * y, gamma), c * u, rtol=1e-12, atol=1e-9)


@given(series)
def test_reversal_symmetry_gamma0(y):
    n = len(y)
    fwd = np.abs(cusum_profile(y, 0.0))
    rev = np.abs(cusum_profile(y[::-1], 0.0))
    for k in range(1, n):
        assert abs(fwd[k - 1] - rev[n - k - 1]) <= 1e-9


def test_expected_profile_examples():
    cfg = ChangePointConfig(mu=1, delta=2, tau_star=0.5)
    ep = expected_profile(cfg, 4, 0.5)
    assert ep[1] == pytest.approx(-2.0, abs=1e-15)
    zero = ChangePointConfig(mu=3, delta=0.0, tau_star=0.5, diagnostic=True)
    assert np.array_equal(expected_profile(zero, 9, 0.3), np.zeros(8))


@given(st.integers(2, 200), gammas, st.floats(-3, 3), st.floats(-5, 5), st.floats(0.02, 0.98))
def test_expected_profile_equals_profile_of_means(n, gamma, mu, delta, tau):
    if not 1 <= int(n * tau) < n or delta == 0:
        return
    cfg = ChangePointConfig(mu=mu, delta=delta, tau_star=tau)
    diff = expected_profile(cfg, n, gamma) - cusum_profile(mean_vector(cfg, n), gamma)
    assert np.max(np.abs(diff)) <= 1e-12 * max(1.0, abs(mu) + abs(delta)) * 10


def test_expected_profile_with_index_means():
    cfg = ChangePointConfig(delta=1.5, tau_star=0.3, mu_fn=lambda n, k: np.sin(k))
    np.testing.assert_allclose(
        expected_profile(cfg, 40, 0.4), cusum_profile(mean_vector(cfg, 40), 0.4), atol=1e-12
    )


@pytest.mark.parametrize(
    "u, n, k_hat, tau_hat",
    [([1, 3, 3], 4, 2, 0.5), ([5, 1, 1], 4, 1, 0.25), ([0, 0], 3, 1, 1 / 3), ([-1, 3, -3], 4, 2, 0.5)],
)
def test_estimate_examples(u, n, k_hat, tau_hat):
    est = estimate(np.array(u, dtype=float), n)
    assert est.k_hat == k_hat
    assert est.tau_hat == tau_hat


def test_estimate_validation():
    with pytest.raises(InvalidInputError):
        estimate(np.array([]), 1)
    with pytest.raises(InvalidInputError):
        estimate(np.array([1.0, 2.0]), 5)


@given(series, gammas, st.floats(0.01, 100))
def test_argmax_invariant_under_positive_scaling(y, gamma, c):
    n = len(y)
    base = estimate(cusum_profile(y, gamma), n)
    u = np.abs(cusum_profile(y, gamma))
    # near-ties can legitimately flip under rounding; only check clear maxima
    top = np.sort(u)[::-1]
    if len(top) > 1 and top[0] - top[1] <= 1e-9 * max(1.0, top[0]):
        return
    assert estimate(cusum_profile(c * y, gamma), n).k_hat == base.k_hat


def test_bound_constant_arithmetic():
    assert bound_constant(0.0, 0.5) == 0.25
    cfg = ChangePointConfig(mu=0.0, delta=1.0, tau_star=0.5)
    y = mean_vector(cfg, 10).copy()
    y[:3] += 5.0  # pulls the estimate away from k* = 5
    u = cusum_profile(y, 0.0)
    est = estimate(u, 10)
    lhs, rhs = deviation_bound_sides(cfg, 10, 0.0, u)
    assert lhs == pytest.approx(0.25 * abs(0.5 - est.tau_hat), rel=1e-15)
    assert rhs == pytest.approx(2 / 10 * np.max(np.abs(u - expected_profile(cfg, 10, 0.0))), rel=1e-15)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 0.9])
def test_noiseless_bound(gamma):
    cfg = ChangePointConfig(mu=1.0, delta=2.0, tau_star=0.5)
    n = 100
    u = cusum_profile(mean_vector(cfg, n), gamma)
    lhs, rhs = deviation_bound_sides(cfg, n, gamma, u)
    k_hat = estimate(u, n).k_hat
    eu = np.abs(expected_profile(cfg, n, gamma))
    assert eu[k_hat - 1] == pytest.approx(eu.max(), rel=1e-12)
    assert rhs <= 1e-12
    assert lhs <= rhs


def test_bound_needs_shift():
    cfg = ChangePointConfig(delta=0.0, diagnostic=True)
    with pytest.raises(BoundUndefinedError):
        deviation_bound_sides(cfg, 10, 0.0, np.zeros(9))


@given(st.integers(0, 2**32 - 1), gammas, st.sampled_from([0.5, 1.0, 3.0]))
def test_bound_holds_for_gaussian_noise(seed, gamma, delta):
    rng = np.random.default_rng(seed)
    n = 200
    cfg = ChangePointConfig(mu=1.0, delta=delta, tau_star=0.5)
    y = mean_vector(cfg, n) + rng.normal(size=n)
    lhs, rhs = deviation_bound_sides(cfg, n, gamma, cusum_profile(y, gamma))
    assert lhs <= rhs * (1 + 1e-12)

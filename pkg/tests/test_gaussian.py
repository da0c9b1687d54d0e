import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from cusumlab.errors import FactorizationError, InvalidInputError
from cusumlab.gaussian import (
    CovarianceSpec,
    abs_moment,
    build_sigma,
    cholesky_factor,
    marginal_variance,
    marginal_variances,
    reconstruction_error,
    sample_row,
    sample_rows,
)
from cusumlab.streams import seed_stream


def test_pinned_entries_n3():
    cov = build_sigma(CovarianceSpec(3, 2.0))
    assert cov[0, 0] == pytest.approx(0.3958333333333333, abs=1e-12)
    assert cov[0, 1] == pytest.approx(-0.015625, abs=1e-12)
    assert cov[2, 2] == pytest.approx(1.046875, abs=1e-12)


def test_entry_pattern_against_direct_powers():
    n, sigma = 6, 2.5
    cov = build_sigma(CovarianceSpec(n, sigma))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                expected = i / n + i * sigma ** (-n - i) / (sigma - 1)
            else:
                expected = -(sigma ** (-n - i - j))
            assert cov[i - 1, j - 1] == pytest.approx(expected, rel=1e-13)
    # the corner entries are the displayed ones
    assert cov[0, n - 1] == pytest.approx(-(sigma ** (-2 * n - 1)), rel=1e-13)
    assert cov[n - 1, n - 1] == pytest.approx(1 + n * sigma ** (-2 * n) / (sigma - 1), rel=1e-13)


@given(st.integers(1, 60), st.floats(1.01, 10.0))
def test_sigma_structure(n, sigma):
    spec = CovarianceSpec(n, sigma)
    cov = build_sigma(spec)
    assert np.array_equal(cov, cov.T)
    assert np.all(np.diag(cov) > 0)
    off = cov[~np.eye(n, dtype=bool)]
    assert np.all(off <= 0)
    assert np.array_equal(np.diag(cov), marginal_variances(spec))
    for j in (1, n):
        assert marginal_variance(spec, j) == cov[j - 1, j - 1]


def test_marginal_variance_examples():
    assert marginal_variance(CovarianceSpec(3, 2.0), 3) == pytest.approx(1.046875, abs=1e-14)
    assert marginal_variance(CovarianceSpec(2, 2.0), 1) == pytest.approx(0.625, abs=1e-14)
    assert marginal_variance(CovarianceSpec(200, 2.0), 200) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidInputError):
        marginal_variance(CovarianceSpec(3, 2.0), 4)


@pytest.mark.parametrize("n, sigma", [(0, 2.0), (3, 1.0), (3, 0.5)])
def test_spec_validation(n, sigma):
    with pytest.raises(InvalidInputError):
        CovarianceSpec(n, sigma)


def test_cholesky_examples():
    assert np.array_equal(cholesky_factor(np.eye(2)), np.eye(2))
    assert np.array_equal(cholesky_factor(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    cov = build_sigma(CovarianceSpec(10, 2.0))
    lower = cholesky_factor(cov)
    assert np.array_equal(lower, np.tril(lower))
    assert np.linalg.norm(lower @ lower.T - cov) <= 1e-10


def test_cholesky_reports_failing_pivot():
    cov = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 2.0, 1.0]])
    with pytest.raises(FactorizationError) as info:
        cholesky_factor(cov)
    assert info.value.pivot == 3


def test_cholesky_rejects_asymmetry():
    with pytest.raises(InvalidInputError):
        cholesky_factor(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_sample_row_identity_factor_passes_normals_through():
    z = seed_stream(5).normals(4)
    assert np.array_equal(sample_row(np.eye(4), seed_stream(5)), z)


def test_sample_row_reproducible():
    lower = cholesky_factor(build_sigma(CovarianceSpec(30, 2.0)))
    assert np.array_equal(sample_row(lower, seed_stream(11)), sample_row(lower, seed_stream(11)))


def test_empirical_covariance():
    spec = CovarianceSpec(10, 2.0)
    cov = build_sigma(spec)
    rows = sample_rows(cholesky_factor(cov), seed_stream(21), 100_000)
    var = rows.var(axis=0, ddof=1)
    np.testing.assert_allclose(var, marginal_variances(spec), rtol=0.05)
    centered = rows - rows.mean(axis=0)
    reps = rows.shape[0]
    for i in range(10):
        for j in range(i + 1, 10):
            prod = centered[:, i] * centered[:, j]
            se = prod.std(ddof=1) / math.sqrt(reps)
            assert prod.mean() <= 3 * se


def test_marginal_law_ks_n50():
    spec = CovarianceSpec(50, 2.0)
    rows = sample_rows(cholesky_factor(build_sigma(spec)), seed_stream(2024), 10_000)
    crit = stats.kstwo.ppf(0.99, rows.shape[0])
    sd = np.sqrt(marginal_variances(spec))
    worst = max(stats.kstest(rows[:, j], "norm", args=(0.0, sd[j])).statistic for j in range(50))
    assert worst < crit


@pytest.mark.parametrize("v", [0.0, 1e-300, 0.3, 1.5, 7.0, 1e200])
def test_abs_moment_second_order_is_variance(v):
    assert abs_moment(2, v) == v


def test_abs_moment_examples():
    assert abs_moment(1, 1) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-13)
    assert abs_moment(4, 1) == 3.0
    # odd-order path goes through the gamma function; compare with the closed form
    assert abs_moment(3, 2.0) == pytest.approx(2 * math.sqrt(2 / math.pi) * 2.0**1.5, rel=1e-12)
    assert abs_moment(4.0000001, 1) == pytest.approx(3.0, rel=1e-6)


def test_abs_moment_validation():
    with pytest.raises(InvalidInputError):
        abs_moment(2, -1.0)
    with pytest.raises(InvalidInputError):
        abs_moment(0, 1.0)


@given(st.floats(0.1, 20.0), st.floats(0.01, 100.0))
def test_abs_moment_matches_scipy_gamma(r, v):
    expected = 2 ** (r / 2) / math.sqrt(math.pi) * math.gamma((r + 1) / 2) * v ** (r / 2)
    assert abs_moment(r, v) == pytest.approx(expected, rel=1e-10)

"""CUSUM change-point estimation under negatively associated Gaussian noise."""

from .cusum import CusumParams, Estimate, cusum_profile, deviation_bound_sides, estimate, expected_profile
from .gaussian import (
    CovarianceSpec,
    abs_moment,
    build_sigma,
    cholesky_factor,
    marginal_variance,
    sample_row,
)
from .model import ChangePointConfig, change_index, generate_row, mean_vector
from .rates import RateParams, SeriesVerdict, classify_rate, partial_sum_diagnostic, series_terms
from .special import gamma_fn, norm_ppf
from .streams import derive_stream
from .truncation import (
    TruncationLevel,
    all_within,
    max_abs_centered_partial_sums,
    split_tail,
    truncate,
    truncated_variance_sum,
)

__version__ = "0.1.0"

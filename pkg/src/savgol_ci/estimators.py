"""scikit-learn compatible wrappers around the functional API.

The estimators treat a single equally spaced series as the data: ``fit``
takes ``y`` (or a column vector ``X`` of shape (q, 1)), and ``transform``
returns the smoothed series. This lets the filter sit in a
``sklearn.pipeline.Pipeline`` and gives ``get_params``/``set_params`` and
``clone`` for free.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_probability, check_series
from .core import FilterSpec, Weighting, apply_filter, build_coefficient_bank
from .noise import (
    differenced_sd,
    estimate_noise_floor,
    min_half_window,
    residual_sd,
    select_m,
    sweep_residual_sd,
    unbias,
)
from .uncertainty import bands, output_sd

__all__ = ["SavitzkyGolaySmoother", "AutoSavitzkyGolay"]


def _as_series(X, y, min_length):
    # accept fit(y), fit(X) with X a column, or fit(X, y) in sklearn style
    data = y if y is not None and X is None else X
    if data is None:
        raise ValueError("no data given")
    return check_series(data, "X", min_length=min_length)


class SavitzkyGolaySmoother(TransformerMixin, BaseEstimator):
    """Weighted Savitzky-Golay smoother with noise estimate and confidence bands.

    Parameters
    ----------
    n : int, default=5
        Number of polynomial coefficients.
    m : int, default=9
        Half-window.
    weighting : {"optimal", "uniform"}, default="optimal"
    level : float, default=0.95
        Coverage of the confidence bands.

    Attributes
    ----------
    spec_ : FilterSpec
    bank_ : CoefficientBank
    filtered_ : FilteredSeries
        Result of filtering the training series.
    noise_ : NoiseEstimate
        Unbiased residual noise SD of the training series.
    noise_differenced_ : NoiseEstimate
        Biased differenced-residual SD, for comparison with ``noise_``.
    bands_ : ConfidenceBands
    """

    def __init__(self, n=5, m=9, weighting="optimal", level=0.95):
        self.n = n
        self.m = m
        self.weighting = weighting
        self.level = level

    def _spec(self):
        return FilterSpec(self.n, self.m, Weighting(self.weighting))

    def fit(self, X, y=None):
        spec = self._spec()
        check_probability(self.level)
        data = _as_series(X, y, spec.window)
        filtered = apply_filter(spec, data)
        self.spec_ = spec
        self.bank_ = build_coefficient_bank(spec)
        self.filtered_ = filtered
        self.noise_ = unbias(residual_sd(data, filtered.yf, spec))
        self.noise_differenced_ = differenced_sd(data, filtered.yf, spec)
        self.bands_ = bands(filtered, output_sd(self.bank_, self.noise_, data.size), self.level)
        self.n_samples_ = data.size
        return self

    def transform(self, X):
        """Smoothed values of ``X``."""
        check_is_fitted(self, "spec_")
        return apply_filter(self.spec_, check_series(X, "X")).yf

    def derivative(self, X):
        """First derivative of the smoothed ``X`` per sample step."""
        check_is_fitted(self, "spec_")
        return apply_filter(self.spec_, check_series(X, "X")).dyf

    def confidence_bands(self, X, level=None):
        """Bands for ``X`` using the noise level estimated during ``fit``."""
        check_is_fitted(self, "spec_")
        data = check_series(X, "X")
        filtered = apply_filter(self.spec_, data)
        sds = output_sd(self.bank_, self.noise_, data.size)
        return bands(filtered, sds, self.level if level is None else level)


class AutoSavitzkyGolay(SavitzkyGolaySmoother):
    """Smoother that picks the half-window from the data.

    ``fit`` sweeps m from the smallest legal value to ``max_m``, reads
    the noise floor from the plateau of the differenced-residual SD and
    keeps the m whose plain residual SD is closest to it. If the series
    is too short for ``max_m`` the sweep stops at the longest window
    that fits.

    Attributes
    ----------
    sweep_ : SweepTable
    floor_ : NoiseEstimate
    m_ : int
        Selected half-window.
    """

    def __init__(self, n=5, max_m=25, weighting="optimal", level=0.95, threshold=0.02):
        self.n = n
        self.max_m = max_m
        self.weighting = weighting
        self.level = level
        self.threshold = threshold

    def _spec(self):
        return FilterSpec(self.n, self.m_, Weighting(self.weighting))

    def fit(self, X, y=None):
        n = check_int(self.n, "n", minimum=1)
        data = _as_series(X, y, 2 * min_half_window(n) + 1)
        p = min(check_int(self.max_m, "max_m", minimum=1), (data.size - 1) // 2)
        self.sweep_ = sweep_residual_sd(n, p, data, Weighting(self.weighting))
        self.floor_ = estimate_noise_floor(self.sweep_, threshold=self.threshold)
        self.m_ = select_m(self.sweep_, self.floor_)
        return super().fit(np.asarray(data))

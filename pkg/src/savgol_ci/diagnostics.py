"""Checks on the residuals behind a noise estimate."""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre

from ._validation import check_series
from .exceptions import ConditioningError, DegenerateDataError
from .special import f_cdf, f_ppf, f_sf, norm_ppf

__all__ = [
    "VarianceTest",
    "variance_ratio_test",
    "ProbabilityPlotData",
    "normal_plot_data",
    "PolynomialOracle",
    "polynomial_fit",
    "polynomial_noise_oracle",
    "linear_trend",
]


@dataclass(frozen=True)
class VarianceTest:
    """Two-sided F test of equal variance between the two halves of a series.

    ``lower`` and ``upper`` bound the central 95% interval of the ratio
    under the null hypothesis.
    """

    ratio: float
    n1: int
    n2: int
    p_value: float
    lower: float
    upper: float

    @property
    def pass_95(self):
        return self.p_value >= 0.05


def variance_ratio_test(residuals):
    """Compare the variance of the first and second half of ``residuals``.

    The first half holds ``q // 2`` samples, the second the rest, so the
    halves never overlap. Sample variances use ``ddof=1``.
    """
    r = check_series(residuals, "residuals", min_length=8)
    h = r.size // 2
    first, second = r[:h], r[h:]
    v1 = float(np.var(first, ddof=1))
    v2 = float(np.var(second, ddof=1))
    if v1 == 0.0 or v2 == 0.0:
        raise DegenerateDataError("one half of the residuals has zero variance")
    d1, d2 = first.size - 1, second.size - 1
    ratio = v1 / v2
    p = 2.0 * min(f_cdf(ratio, d1, d2), f_sf(ratio, d1, d2))
    return VarianceTest(
        ratio=ratio,
        n1=first.size,
        n2=second.size,
        p_value=min(1.0, p),
        lower=f_ppf(0.025, d1, d2),
        upper=f_ppf(0.975, d1, d2),
    )


@dataclass(frozen=True)
class ProbabilityPlotData:
    theoretical: np.ndarray
    ordered: np.ndarray

    def max_deviation(self):
        """Largest vertical distance of the points from the line y = x."""
        return float(np.max(np.abs(self.ordered - self.theoretical)))


def normal_plot_data(residuals, sd):
    """Sorted normalised residuals against normal quantiles at (i - 0.5)/q."""
    r = check_series(residuals, "residuals", min_length=3)
    scale = sd.sd if hasattr(sd, "sd") else float(sd)
    if not scale > 0:
        raise ValueError("noise standard deviation must be positive to normalise residuals")
    q = r.size
    probs = (np.arange(1, q + 1) - 0.5) / q
    theoretical = np.array([norm_ppf(p) for p in probs])
    return ProbabilityPlotData(theoretical=theoretical, ordered=np.sort(r / scale))


def _unit_abscissa(q):
    return np.linspace(-1.0, 1.0, q)


def polynomial_fit(y, degree, rtol=1e-6):
    """Least-squares fit of a global polynomial to equally spaced ``y``.

    The abscissa is mapped onto [-1, 1] and the fit is done in the
    Legendre basis with an SVD-based solver, which stays well conditioned
    at the degrees (up to ~20) a power basis cannot handle.

    Returns the fitted values.
    """
    y = check_series(y)
    A = legendre.legvander(_unit_abscissa(y.size), degree)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    fitted = A @ coef
    # the normal equations A'(y - fitted) = 0 must hold at a true minimum
    scale = np.linalg.norm(A, 2) * np.linalg.norm(y)
    if scale > 0 and np.linalg.norm(A.T @ (y - fitted)) > rtol * scale:
        raise ConditioningError(
            f"degree-{degree} polynomial fit failed the normal-equation check"
        )
    return fitted


@dataclass(frozen=True)
class PolynomialOracle:
    degrees: np.ndarray
    sd: np.ndarray

    @property
    def min_sd(self):
        return float(np.min(self.sd))

    @property
    def argmin_degree(self):
        return int(self.degrees[int(np.argmin(self.sd))])

    @property
    def rows(self):
        return [(int(d), float(s)) for d, s in zip(self.degrees, self.sd)]


def polynomial_noise_oracle(y, degrees=range(2, 21)):
    """Unbiased residual SD of global polynomial fits over a range of degrees.

    An independent estimate of the noise level: for a smooth enough
    signal the minimum over degrees should agree with the
    filter-based estimate.
    """
    y = check_series(y)
    degrees = np.asarray(list(degrees), dtype=int)
    if degrees.size == 0:
        raise ValueError("no degrees given")
    if degrees.max() + 1 >= y.size:
        raise ValueError(
            f"maximum degree {degrees.max()} needs more than {degrees.max() + 1} samples, "
            f"got {y.size}"
        )
    sd = np.empty(degrees.size)
    for k, d in enumerate(degrees):
        r = y - polynomial_fit(y, int(d))
        sd[k] = np.sqrt(float(r @ r) / (y.size - (d + 1)))
    return PolynomialOracle(degrees=degrees, sd=sd)


def linear_trend(values):
    """Ordinary least-squares straight line through equally spaced values."""
    v = check_series(values, min_length=2)
    t = np.arange(v.size, dtype=float)
    slope, intercept = np.polyfit(t, v, 1)
    return intercept + slope * t

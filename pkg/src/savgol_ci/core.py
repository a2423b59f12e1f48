"""Weighted Savitzky-Golay smoothing and differentiation filters.

The filter for half-window ``m`` fits a polynomial with ``n`` coefficients
to ``2m + 1`` equally spaced samples by weighted least squares and
evaluates the fit (or its first derivative) at one sample of the window.
Every such evaluation is a fixed linear combination of the window, so
the whole filter is summarised by two ``(2m+1, 2m+1)`` coefficient
matrices whose row ``j`` gives the output at window position ``j``.

Interior samples of a series use the centre row. The first and last
``m`` samples use the off-centre rows of a window pinned to the ends of
the data.
"""

import enum
import functools
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ._validation import check_int, check_series
from .exceptions import (
    ConditioningError,
    EvenParameterCountWarning,
    SeriesTooShortError,
    SpecError,
)

__all__ = [
    "Weighting",
    "FilterSpec",
    "DesignMatrices",
    "CoefficientBank",
    "FilteredSeries",
    "quadratic_weight",
    "build_weights",
    "design_matrices",
    "build_coefficient_bank",
    "window_layout",
    "filter_operators",
    "apply_filter",
]

#: Largest condition number of X^T W X we accept.
MAX_CONDITION = 1e12


class Weighting(str, enum.Enum):
    OPTIMAL_QUADRATIC = "optimal"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class FilterSpec:
    """Filter parameters.

    Parameters
    ----------
    n : int
        Number of polynomial coefficients (the fit has degree ``n - 1``).
    m : int
        Half-window; the window holds ``2m + 1`` samples.
    weighting : Weighting or str
        ``"optimal"`` (quadratic weights, the default) or ``"uniform"``.
    """

    n: int
    m: int
    weighting: Weighting = Weighting.OPTIMAL_QUADRATIC

    def __post_init__(self):
        n = check_int(self.n, "n")
        m = check_int(self.m, "m")
        if n < 1:
            raise SpecError(f"n >= 1 violated: n = {n}")
        if m < 1:
            raise SpecError(f"m >= 1 violated: m = {m}")
        if not 2 * m + 1 > n:
            raise SpecError(
                f"2m+1 > n violated: 2*{m}+1 = {2 * m + 1} <= n = {n}; "
                "the local fit would not be over-determined"
            )
        try:
            weighting = Weighting(self.weighting)
        except ValueError:
            raise SpecError(f"unknown weighting {self.weighting!r}") from None
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "weighting", weighting)

    @property
    def window(self):
        """Window length ``2m + 1``."""
        return 2 * self.m + 1

    @property
    def dof(self):
        """Residual degrees of freedom of one local fit, ``2m + 1 - n``."""
        return 2 * self.m + 1 - self.n


def quadratic_weight(i, m):
    """Optimal quadratic weight for window index ``i`` (1-based).

    Defined for any real ``i``; it is zero at the virtual indices 0 and
    ``2m + 2`` just outside the window.
    """
    i = np.asarray(i, dtype=float)
    return 3.0 * i / (2 * m + 3) * (2.0 - i / (m + 1))


def build_weights(spec):
    """Diagonal of the weight matrix, length ``2m + 1``; mean is one."""
    if spec.weighting is Weighting.UNIFORM:
        return np.ones(spec.window)
    return quadratic_weight(np.arange(1, spec.window + 1), spec.m)


@dataclass(frozen=True)
class DesignMatrices:
    """Abscissa, design matrix, weights and derivative operator for one spec.

    ``X[i, k] = x[i] ** k``; ``D[k-1, k] = k / m`` maps polynomial
    coefficients to the coefficients of the derivative taken per sample
    step (the abscissa spacing is ``1/m``).
    """

    x: np.ndarray
    X: np.ndarray
    w: np.ndarray
    D: np.ndarray


def design_matrices(spec):
    m, n = spec.m, spec.n
    x = (np.arange(1, spec.window + 1) - 1 - m) / m
    X = np.vander(x, n, increasing=True)
    D = np.zeros((n, n))
    k = np.arange(1, n)
    D[k - 1, k] = k / m
    return DesignMatrices(x=x, X=X, w=build_weights(spec), D=D)


@dataclass(frozen=True)
class CoefficientBank:
    """Smoothing and first-derivative coefficients for every window position.

    ``smooth[j] @ window`` is the fitted value at window position ``j``
    (0-based) and ``deriv[j] @ window`` its derivative per sample step.
    """

    spec: FilterSpec
    smooth: np.ndarray
    deriv: np.ndarray

    @property
    def center(self):
        return self.spec.m

    def smooth_norms(self):
        """Root sum of squares of each smoothing row."""
        return np.sqrt(np.sum(self.smooth**2, axis=1))

    def deriv_norms(self):
        return np.sqrt(np.sum(self.deriv**2, axis=1))


@functools.lru_cache(maxsize=256)
def build_coefficient_bank(spec):
    """Compute ``X (X'WX)^-1 X'W`` and ``X D (X'WX)^-1 X'W`` for ``spec``.

    The normal matrix is symmetric positive definite, so it is factored
    by Cholesky rather than inverted. Results are cached per spec and
    returned read-only.

    Raises
    ------
    ConditioningError
        If the condition number of ``X'WX`` exceeds ``MAX_CONDITION``.
    """
    if spec.n % 2 == 0:
        warnings.warn(
            f"n = {spec.n} is even; n = {spec.n - 1} gives the same interior "
            "smoothing with narrower confidence bands",
            EvenParameterCountWarning,
            stacklevel=2,
        )
    dm = design_matrices(spec)
    XtW = dm.X.T * dm.w
    normal = XtW @ dm.X
    cond = np.linalg.cond(normal)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(
            f"X'WX for n={spec.n}, m={spec.m} has condition number {cond:.3g} "
            f"(limit {MAX_CONDITION:.0e}); use a smaller n"
        )
    # A = (X'WX)^-1 X'W, shape (n, 2m+1)
    A = linalg.cho_solve(linalg.cho_factor(normal), XtW)
    smooth = dm.X @ A
    deriv = dm.X @ dm.D @ A
    smooth.flags.writeable = False
    deriv.flags.writeable = False
    return CoefficientBank(spec=spec, smooth=smooth, deriv=deriv)


def window_layout(q, m):
    """Window start and coefficient row used for each output sample.

    Returns two integer arrays of length ``q``: ``start[t]`` is the index
    of the first sample of the window feeding output ``t`` and ``row[t]``
    the bank row applied to it.
    """
    w = 2 * m + 1
    if q < w:
        raise SeriesTooShortError(
            f"series of length {q} is shorter than the window 2m+1 = {w}",
            minimum=w,
        )
    t = np.arange(q)
    start = np.clip(t - m, 0, q - w)
    row = t - start
    return start, row


@dataclass(frozen=True)
class FilteredSeries:
    """Smoothed values and per-sample first derivatives of a series."""

    spec: FilterSpec
    yf: np.ndarray
    dyf: np.ndarray

    @property
    def q(self):
        return self.yf.size


def filter_operators(spec, q):
    """Dense ``(q, q)`` matrices ``H`` and ``G`` with ``yf = H y``, ``dyf = G y``.

    Handy for applying the filter to many series at once and for
    propagating covariances; ``apply_filter`` does not use them.
    """
    bank = build_coefficient_bank(spec)
    start, row = window_layout(q, spec.m)
    H = np.zeros((q, q))
    G = np.zeros((q, q))
    cols = start[:, None] + np.arange(spec.window)
    H[np.arange(q)[:, None], cols] = bank.smooth[row]
    G[np.arange(q)[:, None], cols] = bank.deriv[row]
    return H, G


def apply_filter(spec, y):
    """Filter ``y`` with the Savitzky-Golay filter described by ``spec``.

    Parameters
    ----------
    spec : FilterSpec
    y : array_like, shape (q,)
        Equally spaced, finite samples with ``q >= 2m + 1``.

    Returns
    -------
    FilteredSeries
        ``yf`` in the units of ``y``; ``dyf`` in units of ``y`` per sample.
    """
    m, w = spec.m, spec.window
    y = check_series(y)
    q = y.size
    if q < w:
        raise SeriesTooShortError(
            f"series of length {q} is too short for m={m}; "
            f"minimum length is 2m+1 = {w}",
            minimum=w,
        )
    bank = build_coefficient_bank(spec)
    windows = np.lib.stride_tricks.sliding_window_view(y, w)

    yf = np.empty(q)
    dyf = np.empty(q)
    yf[m : q - m] = windows @ bank.smooth[m]
    dyf[m : q - m] = windows @ bank.deriv[m]
    yf[:m] = bank.smooth[:m] @ windows[0]
    dyf[:m] = bank.deriv[:m] @ windows[0]
    yf[q - m :] = bank.smooth[m + 1 :] @ windows[-1]
    dyf[q - m :] = bank.deriv[m + 1 :] @ windows[-1]
    return FilteredSeries(spec=spec, yf=yf, dyf=dyf)

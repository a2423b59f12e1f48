"""Input-noise estimates from filter residuals and data-driven choice of m.

Two biased variance estimators are available:

* the plain mean square of the residuals ``y - yf``, which depends
  strongly on how well ``(n, m)`` matches the signal, and
* half the mean square of the first differences of the residuals, which
  stays close to the true noise level over a wide range of ``m`` because
  differencing strips most of the signal trend before the fit has to
  account for it.

The sweep over ``m`` tabulates both; the plateau of the second gives the
noise floor and ``m`` is chosen so the first matches that floor.
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from ._validation import check_int, check_same_length, check_series
from .core import FilterSpec, Weighting, apply_filter
from .exceptions import BiasStateError, PlateauNotFoundError, SeriesTooShortError

__all__ = [
    "NoiseMethod",
    "Bias",
    "NoiseEstimate",
    "SweepTable",
    "residual_sd",
    "differenced_sd",
    "unbias",
    "bias_factor",
    "sweep_residual_sd",
    "estimate_noise_floor",
    "select_m",
]


class NoiseMethod(str, enum.Enum):
    RESIDUAL_VARIANCE = "residual"
    DIFFERENCED_RESIDUAL_VARIANCE = "differenced"


class Bias(str, enum.Enum):
    BIASED = "biased"
    UNBIASED = "unbiased"


@dataclass(frozen=True)
class NoiseEstimate:
    """A noise standard deviation together with how it was obtained.

    ``m_range`` is only set by :func:`estimate_noise_floor` and records the
    span of half-windows the plateau was read from.
    """

    sd: float
    method: NoiseMethod
    bias: Bias = Bias.BIASED
    spec: FilterSpec = None
    m_range: tuple = None

    def __post_init__(self):
        if not self.sd >= 0:
            raise ValueError(f"standard deviation must be >= 0, got {self.sd}")

    @property
    def variance(self):
        return self.sd**2


def residual_sd(y, yf, spec=None):
    """Biased noise SD from the mean square of ``y - yf``."""
    y, yf = check_same_length(y, yf, min_length=2)
    r = y - yf
    sd = math.sqrt(float(np.mean(r * r)))
    return NoiseEstimate(sd, NoiseMethod.RESIDUAL_VARIANCE, Bias.BIASED, spec)


def differenced_sd(y, yf, spec=None):
    """Biased noise SD from first differences of input minus output.

    Differences of independent noise have twice the noise variance, hence
    the ``2 (q - 1)`` normaliser.
    """
    y, yf = check_same_length(y, yf, min_length=3)
    d = np.diff(y) - np.diff(yf)
    sd = math.sqrt(float(np.sum(d * d)) / (2 * (y.size - 1)))
    return NoiseEstimate(
        sd, NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE, Bias.BIASED, spec
    )


def bias_factor(spec):
    """Variance correction ``(2m + 1) / (2m + 1 - n)``."""
    return spec.window / spec.dof


def unbias(estimate):
    """Apply the degrees-of-freedom correction to a biased estimate.

    Raises
    ------
    BiasStateError
        If the estimate is already unbiased or carries no filter spec.
    """
    if estimate.bias is Bias.UNBIASED:
        raise BiasStateError("estimate is already unbiased; refusing to correct twice")
    if estimate.spec is None:
        raise BiasStateError("cannot unbias an estimate without its filter spec")
    sd = estimate.sd * math.sqrt(bias_factor(estimate.spec))
    return replace(estimate, sd=sd, bias=Bias.UNBIASED)


@dataclass(frozen=True)
class SweepTable:
    """Biased residual SDs for a fixed ``n`` over a range of half-windows."""

    n: int
    m: np.ndarray
    sd_a: np.ndarray
    sd_b: np.ndarray
    weighting: Weighting = Weighting.OPTIMAL_QUADRATIC

    def __post_init__(self):
        m = np.asarray(self.m, dtype=int)
        if m.size and (np.any(np.diff(m) <= 0) or not 2 * m[0] + 1 > self.n):
            raise ValueError("m must increase strictly and satisfy 2m+1 > n")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "sd_a", np.asarray(self.sd_a, dtype=float))
        object.__setattr__(self, "sd_b", np.asarray(self.sd_b, dtype=float))

    def __len__(self):
        return self.m.size

    @property
    def rows(self):
        return [
            (int(m), float(a), float(b))
            for m, a, b in zip(self.m, self.sd_a, self.sd_b)
        ]

    def spec(self, m):
        return FilterSpec(self.n, int(m), self.weighting)


def min_half_window(n):
    """Smallest m with 2m + 1 > n."""
    return (n - 1) // 2 + 1 if n >= 1 else 1


def sweep_residual_sd(n, p, y, weighting=Weighting.OPTIMAL_QUADRATIC):
    """Tabulate both biased residual SDs for m from the smallest legal value to p.

    The degrees-of-freedom correction is deliberately not applied: both
    columns share the same correction at a given m, so the comparison
    that picks m is unaffected and the raw values are easier to read.
    """
    n = check_int(n, "n", minimum=1)
    p = check_int(p, "p")
    y = check_series(y)
    m0 = min_half_window(n)
    if p < m0:
        raise ValueError(f"p = {p} is below the smallest legal half-window {m0} for n = {n}")
    if y.size < 2 * p + 1:
        raise SeriesTooShortError(
            f"series of length {y.size} supports at most p = {(y.size - 1) // 2}, "
            f"got p = {p}",
            minimum=2 * p + 1,
        )
    ms = np.arange(m0, p + 1)
    sd_a = np.empty(ms.size)
    sd_b = np.empty(ms.size)
    for k, m in enumerate(ms):
        spec = FilterSpec(n, int(m), weighting)
        yf = apply_filter(spec, y).yf
        sd_a[k] = residual_sd(y, yf).sd
        sd_b[k] = differenced_sd(y, yf).sd
    return SweepTable(n=n, m=ms, sd_a=sd_a, sd_b=sd_b, weighting=Weighting(weighting))


def _stable_runs(values, threshold):
    """Maximal runs ``(i, j)`` of row indices whose successive relative changes are below threshold."""
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(np.diff(v)) / np.abs(v[:-1])
    # rows with zero level are only stable against other zero rows
    rel = np.where(v[:-1] == 0, np.where(v[1:] == 0, 0.0, np.inf), rel)
    stable = rel < threshold
    runs = []
    k = 0
    while k < stable.size:
        if stable[k]:
            j = k
            while j < stable.size and stable[j]:
                j += 1
            runs.append((k, j))
            k = j
        else:
            k += 1
    return runs


def estimate_noise_floor(table, threshold=0.02, min_run=3):
    """Read the noise floor off the plateau of the differenced-residual SD.

    The plateau is the longest contiguous stretch of rows in which every
    step changes ``sd_b`` by less than ``threshold`` (relative). Runs that
    start at the first row are skipped: at the smallest half-windows the
    fit follows the noise and ``sd_b`` drops away. Ties in run length go
    to the smaller m. The floor is the median of ``sd_b`` over the run.

    Parameters
    ----------
    table : SweepTable
        At least five rows.
    threshold : float, default 0.02
    min_run : int, default 3
        Fewest rows a plateau may span.

    Returns
    -------
    NoiseEstimate
        Biased, method ``DIFFERENCED_RESIDUAL_VARIANCE``; ``spec`` uses the
        median half-window of the run and ``m_range`` its end points.
    """
    if len(table) < 5:
        raise ValueError(f"sweep table has {len(table)} rows; at least 5 required")
    runs = [
        (i, j)
        for i, j in _stable_runs(table.sd_b, threshold)
        if i > 0 and j - i + 1 >= min_run
    ]
    if not runs:
        raise PlateauNotFoundError(
            f"no run of at least {min_run} half-windows with relative changes "
            f"below {threshold:.1%} in sd_b for n = {table.n}; inspect the sweep "
            "manually or raise the threshold"
        )
    i, j = max(runs, key=lambda r: (r[1] - r[0], -r[0]))
    level = float(np.median(table.sd_b[i : j + 1]))
    m_mid = int(table.m[(i + j) // 2])
    return NoiseEstimate(
        sd=level,
        method=NoiseMethod.DIFFERENCED_RESIDUAL_VARIANCE,
        bias=Bias.BIASED,
        spec=table.spec(m_mid),
        m_range=(int(table.m[i]), int(table.m[j])),
    )


def select_m(table, floor):
    """Half-window whose plain residual SD is closest to the noise floor.

    Ties go to the smaller m (less smoothing).
    """
    if len(table) == 0:
        raise ValueError("sweep table is empty")
    if floor.bias is not Bias.BIASED:
        raise BiasStateError("select_m compares biased values; pass the biased floor")
    gap = np.abs(table.sd_a - floor.sd)
    # np.argmin returns the first minimum, i.e. the smallest m
    return int(table.m[int(np.argmin(gap))])

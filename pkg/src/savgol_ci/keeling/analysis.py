"""End-to-end analysis of an annual CO2 series."""

import contextlib
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .._validation import check_probability
from ..core import FilterSpec, Weighting, apply_filter, build_coefficient_bank
from ..diagnostics import (
    linear_trend,
    normal_plot_data,
    polynomial_noise_oracle,
    variance_ratio_test,
)
from ..exceptions import DomainError, PipelineError, SavgolError
from ..noise import (
    differenced_sd,
    estimate_noise_floor,
    min_half_window,
    residual_sd,
    select_m,
    sweep_residual_sd,
    unbias,
)
from ..uncertainty import bands, coefficient_norms, monte_carlo_validate, output_sd

__all__ = [
    "PRE_INDUSTRIAL_PPM",
    "AnthropogenicSeries",
    "anthropogenic_analysis",
    "AnalysisBundle",
    "run_pipeline",
]

log = logging.getLogger(__name__)

PRE_INDUSTRIAL_PPM = 280.0


@contextlib.contextmanager
def _stage(name):
    try:
        yield
    except PipelineError:
        raise
    except (SavgolError, ValueError, ArithmeticError) as exc:
        raise PipelineError(name, exc) from exc


@dataclass(frozen=True)
class AnthropogenicSeries:
    """Growth of the CO2 excess over the pre-industrial baseline.

    ``log2_excess`` is the filtered base-2 log of ``y - baseline``;
    ``frac_rate`` the fractional growth rate of the excess per year and
    ``frac_rate_sd`` its propagated standard deviation.
    """

    years: np.ndarray
    log2_excess_raw: np.ndarray
    log2_excess: np.ndarray
    frac_rate: np.ndarray
    frac_rate_sd: np.ndarray
    baseline: float
    spec: FilterSpec
    order: str
    noise_sd: float

    @property
    def mean_frac_rate(self):
        return float(np.mean(self.frac_rate))

    @property
    def doubling_period(self):
        return math.log(2.0) / self.mean_frac_rate


def anthropogenic_analysis(series, spec, baseline=PRE_INDUSTRIAL_PPM, order="log-first"):
    """Fractional growth rate and doubling period of the excess over ``baseline``.

    With ``order="log-first"`` (the default) the filter is applied to
    ``z = ln(y - baseline)``; the fractional rate is then the filtered
    derivative of ``z``, a linear statistic of ``z``, and its SD follows
    from the coefficient norms and the unbiased residual noise of ``z``.
    ``order="filter-first"`` instead filters ``y`` and reports
    ``dyf / (yf - baseline)`` with a first-order error propagation.
    """
    y = series.values
    if np.any(y <= baseline):
        bad = series.years[y <= baseline]
        raise DomainError(
            f"values at or below the baseline {baseline} ppm in years {bad.tolist()}"
        )
    q = y.size
    bank = build_coefficient_bank(spec)
    _, deriv_norm = coefficient_norms(bank, q)
    z = np.log(y - baseline)
    if order == "log-first":
        f = apply_filter(spec, z)
        noise = unbias(residual_sd(z, f.yf, spec))
        log2_excess = f.yf / math.log(2.0)
        frac = f.dyf
        frac_sd = noise.sd * deriv_norm
    elif order == "filter-first":
        f = apply_filter(spec, y)
        noise = unbias(residual_sd(y, f.yf, spec))
        excess = f.yf - baseline
        if np.any(excess <= 0):
            raise DomainError("filtered series dips below the baseline")
        log2_excess = np.log2(excess)
        frac = f.dyf / excess
        frac_sd = noise.sd * deriv_norm / excess
    else:
        raise ValueError(f"order must be 'log-first' or 'filter-first', got {order!r}")
    return AnthropogenicSeries(
        years=series.years,
        log2_excess_raw=z / math.log(2.0),
        log2_excess=log2_excess,
        frac_rate=frac,
        frac_rate_sd=frac_sd,
        baseline=float(baseline),
        spec=spec,
        order=order,
        noise_sd=noise.sd,
    )


@dataclass
class AnalysisBundle:
    """Everything the figures and reports are built from."""

    series: object
    seed: int
    level: float
    max_m: int
    sweeps: dict = field(default_factory=dict)
    floors: dict = field(default_factory=dict)
    selected: dict = field(default_factory=dict)
    spec: FilterSpec = None
    filtered: object = None
    noise_biased: object = None
    noise: object = None
    noise_differenced: object = None
    bands: object = None
    variance_test: object = None
    probability_plot: object = None
    oracle: object = None
    montecarlo: object = None
    anthropogenic: object = None
    dy: np.ndarray = None
    dy_trend: np.ndarray = None
    dy_detrended_sd: float = None

    @property
    def residuals(self):
        return self.series.values - self.filtered.yf

    def summary(self):
        mc = self.montecarlo
        q = len(self.series)
        m = self.spec.m
        out = {
            "q": q,
            "first_year": int(self.series.years[0]),
            "last_year": int(self.series.years[-1]),
            "max_m": self.max_m,
            "selected_m": {str(n): m_ for n, m_ in sorted(self.selected.items())},
            "noise_floor": {str(n): e.sd for n, e in sorted(self.floors.items())},
            "noise_floor_m_range": {
                str(n): list(e.m_range) for n, e in sorted(self.floors.items())
            },
            "spec": {"n": self.spec.n, "m": m, "weighting": self.spec.weighting.value},
            "residual_sd_biased": self.noise_biased.sd,
            "residual_sd_unbiased": self.noise.sd,
            "differenced_sd_biased": self.noise_differenced.sd,
            "dy_detrended_sd_per_sample": self.dy_detrended_sd,
            "variance_ratio": self.variance_test.ratio,
            "variance_ratio_p_value": self.variance_test.p_value,
            "variance_ratio_interval_95": [self.variance_test.lower, self.variance_test.upper],
            "variance_ratio_pass_95": self.variance_test.pass_95,
            "half_sizes": [self.variance_test.n1, self.variance_test.n2],
            "normal_plot_max_deviation": self.probability_plot.max_deviation(),
            "polynomial_oracle_min_sd": self.oracle.min_sd,
            "polynomial_oracle_min_degree": self.oracle.argmin_degree,
            "level": self.level,
            "z": self.bands.z,
            "seed": self.seed,
        }
        if mc is not None:
            interior = slice(m, q - m)
            out["montecarlo"] = {
                "trials": mc.trials,
                "sigma": mc.sigma,
                "max_abs_rel_dev_dyf": float(np.max(np.abs(mc.ratio_dyf - 1))),
                "max_abs_rel_dev_yf": float(np.max(np.abs(mc.ratio_yf - 1))),
                "coverage_yf_interior_min": float(np.min(mc.coverage_yf[interior])),
                "coverage_yf_interior_max": float(np.max(mc.coverage_yf[interior])),
                "coverage_dyf_interior_min": float(np.min(mc.coverage_dyf[interior])),
                "coverage_dyf_interior_max": float(np.max(mc.coverage_dyf[interior])),
            }
        if self.anthropogenic is not None:
            a = self.anthropogenic
            out["anthropogenic"] = {
                "baseline": a.baseline,
                "order": a.order,
                "mean_frac_rate": a.mean_frac_rate,
                "doubling_period": a.doubling_period,
                "log_noise_sd_unbiased": a.noise_sd,
            }
        return out


def run_pipeline(
    series,
    n_candidates=(3, 5, 7),
    p=25,
    level=0.95,
    report_n=5,
    seed=0,
    trials=1000,
    weighting=Weighting.OPTIMAL_QUADRATIC,
    m=None,
    baseline=PRE_INDUSTRIAL_PPM,
    anthropogenic_order="log-first",
    mc_sigma=None,
):
    """Sweep, pick the filter, and compute every derived quantity.

    Parameters
    ----------
    series : AnnualSeries
    n_candidates : sequence of int
        Parameter counts to sweep; ``report_n`` is added if missing.
    p : int
        Largest half-window in the sweep. Reduced, with a warning, when the
        series is shorter than ``2p + 1``.
    level : float
        Confidence band coverage.
    report_n : int
        n used for the reported filter.
    seed, trials : int
        Monte Carlo settings; ``trials=0`` skips the Monte Carlo stage.
    m : int, optional
        Fix the reported half-window instead of selecting it.
    baseline : float or None
        Pre-industrial level for the excess-growth analysis; ``None`` skips it.
    mc_sigma : float, optional
        Noise SD for the Monte Carlo; defaults to the unbiased residual SD.
    """
    with _stage("input"):
        series.require_length(3)
        level = check_probability(level)
        q = len(series)
        y = series.values
        weighting = Weighting(weighting)
        candidates = sorted(set(int(n) for n in n_candidates) | {int(report_n)})
        p_max = (q - 1) // 2
        if p > p_max:
            log.warning(
                "series of length %d supports half-windows up to %d; reducing max m from %d",
                q, p_max, p,
            )
            p = p_max

    bundle = AnalysisBundle(series=series, seed=seed, level=level, max_m=p)

    with _stage("sweep"):
        for n in candidates:
            if p < min_half_window(n):
                raise ValueError(f"max m = {p} is too small for n = {n}")
            bundle.sweeps[n] = sweep_residual_sd(n, p, y, weighting)
    with _stage("noise-floor"):
        for n in candidates:
            bundle.floors[n] = estimate_noise_floor(bundle.sweeps[n])
    with _stage("select"):
        for n in candidates:
            bundle.selected[n] = select_m(bundle.sweeps[n], bundle.floors[n])

    with _stage("filter"):
        chosen_m = bundle.selected[report_n] if m is None else m
        spec = FilterSpec(report_n, chosen_m, weighting)
        bundle.spec = spec
        bundle.filtered = apply_filter(spec, y)
        bundle.noise_biased = residual_sd(y, bundle.filtered.yf, spec)
        bundle.noise = unbias(bundle.noise_biased)
        bundle.noise_differenced = differenced_sd(y, bundle.filtered.yf, spec)
    with _stage("ci"):
        sds = output_sd(build_coefficient_bank(spec), bundle.noise, q)
        bundle.bands = bands(bundle.filtered, sds, level)
    with _stage("diagnose"):
        residuals = bundle.residuals
        bundle.variance_test = variance_ratio_test(residuals)
        bundle.probability_plot = normal_plot_data(residuals, bundle.noise)
        max_degree = min(20, q - 2)
        bundle.oracle = polynomial_noise_oracle(y, range(2, max_degree + 1))
        bundle.dy = series.first_differences()
        bundle.dy_trend = linear_trend(bundle.dy)
        detrended = bundle.dy - bundle.dy_trend
        if detrended.size > 2:
            # a difference of two independent samples has twice the noise variance
            bundle.dy_detrended_sd = math.sqrt(
                float(detrended @ detrended) / (detrended.size - 2) / 2.0
            )
    if trials:
        with _stage("montecarlo"):
            sigma = bundle.noise.sd if mc_sigma is None else mc_sigma
            bundle.montecarlo = monte_carlo_validate(spec, y, sigma, trials, seed, level)
    if baseline is not None:
        with _stage("anthropogenic"):
            bundle.anthropogenic = anthropogenic_analysis(
                series, spec, baseline, anthropogenic_order
            )
    return bundle

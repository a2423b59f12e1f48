"""Standard deviations and confidence bands for filter outputs.

Every filter output is a linear combination of independent noisy inputs,
so its noise variance is the input variance times the sum of squared
coefficients of the row that produced it.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_probability, check_series
from .core import FilterSpec, apply_filter, build_coefficient_bank, filter_operators, window_layout
from .exceptions import BiasStateError, SeriesTooShortError
from .noise import Bias, NoiseEstimate
from .special import norm_ppf

__all__ = [
    "coefficient_norms",
    "output_sd",
    "z_value",
    "ConfidenceBands",
    "bands",
    "MonteCarloResult",
    "monte_carlo_validate",
]


def coefficient_norms(bank, q):
    """Per-sample root sum of squared coefficients, smoothing and derivative.

    Multiplying by an input noise SD gives the output SDs.
    """
    _, row = window_layout(q, bank.spec.m)
    return bank.smooth_norms()[row], bank.deriv_norms()[row]


def output_sd(bank, sigma_e, q):
    """SDs of the smoothed values and of the derivatives at every sample.

    Parameters
    ----------
    bank : CoefficientBank
    sigma_e : NoiseEstimate
        Must be unbiased: the biased estimators understate the noise by
        the degrees-of-freedom factor and would give bands that are too
        narrow.
    q : int
        Series length.

    Returns
    -------
    syf, sdyf : ndarray
    """
    if not isinstance(sigma_e, NoiseEstimate):
        raise TypeError("sigma_e must be a NoiseEstimate")
    if sigma_e.bias is not Bias.UNBIASED:
        raise BiasStateError(
            "confidence intervals need an unbiased noise estimate; apply the "
            "(2m+1)/(2m+1-n) degrees-of-freedom correction first (noise.unbias)"
        )
    q = check_int(q, "q", minimum=1)
    smooth, deriv = coefficient_norms(bank, q)
    return sigma_e.sd * smooth, sigma_e.sd * deriv


def z_value(level):
    """Two-sided normal multiplier for coverage ``level``."""
    level = check_probability(level)
    return norm_ppf(0.5 * (1.0 + level))


@dataclass(frozen=True)
class ConfidenceBands:
    syf: np.ndarray
    sdyf: np.ndarray
    level: float
    z: float
    yf_lo: np.ndarray
    yf_hi: np.ndarray
    dyf_lo: np.ndarray
    dyf_hi: np.ndarray


def bands(filtered, sds, level=0.95):
    """Symmetric normal confidence bands around ``yf`` and ``dyf``."""
    syf, sdyf = (np.asarray(s, dtype=float) for s in sds)
    if syf.shape != filtered.yf.shape or sdyf.shape != filtered.dyf.shape:
        raise ValueError("standard deviations must match the filtered series in length")
    z = z_value(level)
    return ConfidenceBands(
        syf=syf,
        sdyf=sdyf,
        level=float(level),
        z=z,
        yf_lo=filtered.yf - z * syf,
        yf_hi=filtered.yf + z * syf,
        dyf_lo=filtered.dyf - z * sdyf,
        dyf_hi=filtered.dyf + z * sdyf,
    )


@dataclass(frozen=True)
class MonteCarloResult:
    """Empirical error statistics of the filter over repeated noisy trials.

    ``sd_yf`` / ``sd_dyf`` are per-sample empirical SDs of the filtered
    value (derivative) minus the filtered noiseless signal;
    ``analytic_yf`` / ``analytic_dyf`` are the corresponding SDs from the
    coefficient norms; ``coverage_yf`` / ``coverage_dyf`` are the
    fractions of trials whose ``level`` band contained the noiseless value.
    """

    spec: FilterSpec
    sigma: float
    trials: int
    seed: int
    level: float
    sd_yf: np.ndarray
    sd_dyf: np.ndarray
    analytic_yf: np.ndarray
    analytic_dyf: np.ndarray
    coverage_yf: np.ndarray
    coverage_dyf: np.ndarray

    @property
    def ratio_yf(self):
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.sd_yf / self.analytic_yf

    @property
    def ratio_dyf(self):
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.sd_dyf / self.analytic_dyf


def trial_noise(seed, trial, q):
    """Standard normal noise for one trial.

    Each trial owns a PCG64 stream seeded from ``(seed, trial)``, so the
    draws do not depend on how trials are scheduled.
    """
    return np.random.default_rng([seed, trial]).standard_normal(q)


def monte_carlo_validate(spec, signal, sigma, trials=1000, seed=0, level=0.95):
    """Check the analytic output SDs against repeated noisy filtering.

    The filtered noiseless ``signal`` is taken as truth. Each trial adds
    independent normal noise of SD ``sigma``, filters, and records the
    deviation of the smoothed values and derivatives from the truth.
    """
    signal = check_series(signal, "signal")
    trials = check_int(trials, "trials", minimum=100)
    seed = check_int(seed, "seed", minimum=0)
    level = check_probability(level)
    sigma = float(sigma)
    if not sigma >= 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    q = signal.size
    if q < spec.window:
        raise SeriesTooShortError(
            f"signal of length {q} is shorter than the window {spec.window}",
            minimum=spec.window,
        )

    clean = apply_filter(spec, signal)
    H, G = filter_operators(spec, q)
    noise = sigma * np.stack([trial_noise(seed, k, q) for k in range(trials)])
    noisy = signal + noise
    err_yf = noisy @ H.T - clean.yf
    err_dyf = noisy @ G.T - clean.dyf

    smooth, deriv = coefficient_norms(build_coefficient_bank(spec), q)
    analytic_yf = sigma * smooth
    analytic_dyf = sigma * deriv
    z = z_value(level)
    return MonteCarloResult(
        spec=spec,
        sigma=sigma,
        trials=trials,
        seed=seed,
        level=level,
        sd_yf=err_yf.std(axis=0, ddof=1),
        sd_dyf=err_dyf.std(axis=0, ddof=1),
        analytic_yf=analytic_yf,
        analytic_dyf=analytic_dyf,
        coverage_yf=np.mean(np.abs(err_yf) <= z * analytic_yf, axis=0),
        coverage_dyf=np.mean(np.abs(err_dyf) <= z * analytic_dyf, axis=0),
    )

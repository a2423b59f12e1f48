"""Weighted Savitzky-Golay filtering with noise estimation and confidence bands."""

from .core import (
    CoefficientBank,
    FilteredSeries,
    FilterSpec,
    Weighting,
    apply_filter,
    build_coefficient_bank,
    build_weights,
)
from .estimators import AutoSavitzkyGolay, SavitzkyGolaySmoother
from .noise import (
    Bias,
    NoiseEstimate,
    NoiseMethod,
    SweepTable,
    differenced_sd,
    estimate_noise_floor,
    residual_sd,
    select_m,
    sweep_residual_sd,
    unbias,
)
from .uncertainty import ConfidenceBands, bands, monte_carlo_validate, output_sd

__version__ = "0.1.0"

__all__ = [
    "AutoSavitzkyGolay",
    "Bias",
    "CoefficientBank",
    "ConfidenceBands",
    "FilterSpec",
    "FilteredSeries",
    "NoiseEstimate",
    "NoiseMethod",
    "SavitzkyGolaySmoother",
    "SweepTable",
    "Weighting",
    "apply_filter",
    "bands",
    "build_coefficient_bank",
    "build_weights",
    "differenced_sd",
    "estimate_noise_floor",
    "monte_carlo_validate",
    "output_sd",
    "residual_sd",
    "select_m",
    "sweep_residual_sd",
    "unbias",
]

"""Keeling-curve reproduction: data loading, analysis pipeline and figure output."""

from .analysis import AnalysisBundle, AnthropogenicSeries, anthropogenic_analysis, run_pipeline
from .data import AnnualSeries, fetch_noaa, load_snapshot, parse_noaa_csv
from .emit import emit, figure_tables

__all__ = [
    "AnalysisBundle",
    "AnnualSeries",
    "AnthropogenicSeries",
    "anthropogenic_analysis",
    "emit",
    "fetch_noaa",
    "figure_tables",
    "load_snapshot",
    "parse_noaa_csv",
    "run_pipeline",
]

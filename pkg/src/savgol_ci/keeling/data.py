"""Reading NOAA annual-mean CO2 files."""

import re
import urllib.request
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..exceptions import DataFormatError, GapError

__all__ = [
    "NOAA_ANNUAL_URL",
    "AnnualSeries",
    "parse_noaa_csv",
    "load_snapshot",
    "fetch_noaa",
]

NOAA_ANNUAL_URL = "https://gml.noaa.gov/webdata/ccgg/trends/co2/co2_annmean_mlo.csv"
SNAPSHOT = "co2_annmean_mlo.csv"

_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class AnnualSeries:
    """Consecutive annual values with provenance.

    Parsing accepts any non-empty series; the analysis stages require at
    least three values (see :meth:`require_length`).
    """

    years: np.ndarray
    values: np.ndarray
    source_metadata: str = ""

    def __post_init__(self):
        years = np.asarray(self.years, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if years.shape != values.shape or years.ndim != 1:
            raise DataFormatError("years and values must be 1-D arrays of equal length")
        if years.size < 1:
            raise DataFormatError("empty series")
        if np.any(np.diff(years) != 1):
            raise GapError(
                "years are not consecutive", missing=_missing_years(years.tolist())
            )
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise DataFormatError("values must be finite and positive")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.years.size

    def require_length(self, minimum=3):
        if self.years.size < minimum:
            raise DataFormatError(
                f"need at least {minimum} annual values, got {self.years.size}"
            )
        return self

    def first_differences(self):
        """Year-on-year change ``y[i+1] - y[i]``, one shorter than the series."""
        return np.diff(self.values)


def _missing_years(years):
    present = set(years)
    return [y for y in range(min(years), max(years) + 1) if y not in present]


def parse_noaa_csv(data, source=""):
    """Parse a NOAA-style annual mean file.

    Lines whose first non-blank character is ``#`` are comments and are
    kept as provenance. Columns are separated by commas or whitespace:
    year, mean, and optionally more columns, which are ignored. A single
    column-header line (first field not a number) is allowed before the
    first data row.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    comments = []
    years = []
    values = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line.lstrip("#").strip())
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        if not years and fields and not _is_number(fields[0]):
            continue  # column header
        if len(fields) < 2:
            raise DataFormatError(f"line {lineno}: expected year and mean, got {raw!r}", line=lineno)
        try:
            year = int(fields[0])
            value = float(fields[1])
        except ValueError:
            raise DataFormatError(f"line {lineno}: cannot parse {raw!r}", line=lineno) from None
        years.append(year)
        values.append(value)
    if not years:
        raise DataFormatError("no data rows found")
    if any(b - a != 1 for a, b in zip(years, years[1:])):
        missing = _missing_years(years)
        detail = f"missing {', '.join(map(str, missing))}" if missing else "years out of order or repeated"
        raise GapError(f"annual series is not consecutive: {detail}", missing=missing)
    meta = "\n".join(c for c in comments if c)
    if source:
        meta = f"{source}\n{meta}" if meta else source
    return AnnualSeries(np.asarray(years), np.asarray(values), meta)


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_snapshot():
    """The vendored 1958-2024 Mauna Loa annual means (67 values)."""
    text = resources.files(__package__).joinpath("data").joinpath(SNAPSHOT).read_text()
    return parse_noaa_csv(text, source=f"vendored snapshot {SNAPSHOT}")


def fetch_noaa(url=NOAA_ANNUAL_URL, timeout=30):
    """Download and parse the current NOAA annual-mean file."""
    with urllib.request.urlopen(url, timeout=timeout) as response:
        payload = response.read()
    return parse_noaa_csv(payload, source=url)

"""Write figure-ready tables from an :class:`AnalysisBundle`.

Each figure gets one table. CSV files carry a header row; JSON files
carry the same columns and rows plus run metadata and validate against
``figure.schema.json``. Floats are written with ``repr`` so output is
exact and byte-for-byte reproducible.
"""

import csv
import io
import json
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = ["FIGURES", "figure_tables", "emit", "load_schema"]

FIGURES = (
    "fig1a_series",
    "fig1b_diff",
    "fig2a_sweep",
    "fig2b_sweep",
    "fig3a_filtered",
    "fig3b_residuals",
    "fig4a_qq",
    "fig4b_polysweep",
    "fig5_derivative_ci",
    "fig6_mc",
    "fig7_log2",
    "fig8_fracrate",
)


def _cell(v):
    if v is None:
        return None
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return None if np.isnan(v) else v


def _table(columns, *cols):
    rows = [[_cell(v) for v in row] for row in zip(*cols)]
    return {"columns": list(columns), "rows": rows}


def figure_tables(bundle):
    """Mapping figure name -> {"columns": [...], "rows": [[...], ...]}."""
    s = bundle.series
    years = s.years
    y = s.values
    f = bundle.filtered
    b = bundle.bands
    tables = {}

    tables["fig1a_series"] = _table(("year", "co2"), years, y)
    tables["fig1b_diff"] = _table(("year", "dy", "trend"), years[1:], bundle.dy, bundle.dy_trend)

    ns, ms, sda, sdb, floor = [], [], [], [], []
    for n, table in sorted(bundle.sweeps.items()):
        ns += [n] * len(table)
        ms += table.m.tolist()
        sda += table.sd_a.tolist()
        sdb += table.sd_b.tolist()
        floor += [bundle.floors[n].sd] * len(table)
    tables["fig2a_sweep"] = _table(("n", "m", "sd_a"), ns, ms, sda)
    tables["fig2b_sweep"] = _table(("n", "m", "sd_b", "noise_floor"), ns, ms, sdb, floor)

    tables["fig3a_filtered"] = _table(
        ("year", "y", "yf", "syf", "lo", "hi"), years, y, f.yf, b.syf, b.yf_lo, b.yf_hi
    )
    resid = bundle.residuals
    tables["fig3b_residuals"] = _table(
        ("year", "residual", "normalized_residual"), years, resid, resid / bundle.noise.sd
    )
    pp = bundle.probability_plot
    tables["fig4a_qq"] = _table(("theoretical", "ordered"), pp.theoretical, pp.ordered)
    tables["fig4b_polysweep"] = _table(
        ("degree", "sd_unbiased"), bundle.oracle.degrees, bundle.oracle.sd
    )

    dy_raw = [None] + bundle.dy.tolist()  # change from the previous year
    tables["fig5_derivative_ci"] = _table(
        ("year", "dyf", "lo", "hi", "dy_raw"), years, f.dyf, b.dyf_lo, b.dyf_hi, dy_raw
    )

    mc = bundle.montecarlo
    if mc is not None:
        tables["fig6_mc"] = _table(
            (
                "year",
                "sd_dyf_empirical",
                "sd_dyf_analytic",
                "sd_yf_empirical",
                "sd_yf_analytic",
                "coverage_yf",
                "coverage_dyf",
            ),
            years,
            mc.sd_dyf,
            mc.analytic_dyf,
            mc.sd_yf,
            mc.analytic_yf,
            mc.coverage_yf,
            mc.coverage_dyf,
        )

    a = bundle.anthropogenic
    if a is not None:
        tables["fig7_log2"] = _table(
            ("year", "log2_excess", "log2_excess_filtered"),
            years,
            a.log2_excess_raw,
            a.log2_excess,
        )
        z = b.z
        tables["fig8_fracrate"] = _table(
            ("year", "frac_rate", "sd", "lo", "hi"),
            years,
            a.frac_rate,
            a.frac_rate_sd,
            a.frac_rate - z * a.frac_rate_sd,
            a.frac_rate + z * a.frac_rate_sd,
        )
    return tables


def _csv_text(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table["columns"])
    for row in table["rows"]:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _metadata(bundle):
    from .. import __version__

    spec = bundle.spec
    return {
        "spec": {"n": spec.n, "m": spec.m, "weighting": spec.weighting.value},
        "seed": bundle.seed,
        "level": bundle.level,
        "version": __version__,
        "source": bundle.series.source_metadata,
    }


def _target(out, name, ext):
    is_dir = str(out).endswith(("/", "\\")) or Path(out).is_dir()
    out = Path(out)
    if is_dir:
        return out / f"{name}.{ext}"
    return out.parent / f"{out.name}_{name}.{ext}"


def emit(bundle, fmt="csv", out="."):
    """Write one file per figure plus ``summary.json``; return the paths written.

    ``out`` is a directory (existing, or given with a trailing slash) or a
    filename prefix such as ``results/keeling``.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    tables = figure_tables(bundle)
    meta = _metadata(bundle)
    first = _target(out, "x", "x").parent
    first.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIGURES:
        if name not in tables:
            continue
        path = _target(out, name, fmt)
        if fmt == "csv":
            text = _csv_text(tables[name])
        else:
            doc = {"figure": name, "metadata": meta, **tables[name]}
            text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
        path.write_text(text)
        written.append(path)
    path = _target(out, "summary", "json")
    doc = {"metadata": meta, "summary": bundle.summary()}
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    written.append(path)
    return written


def load_schema():
    """JSON schema that every emitted figure JSON file satisfies."""
    text = resources.files(__package__).joinpath("figure.schema.json").read_text()
    return json.loads(text)

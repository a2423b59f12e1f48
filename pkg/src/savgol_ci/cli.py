"""Command-line interface: ``savgol-ci <command> [options]``.

Every command reads an annual-mean file (``--input``), the vendored
Mauna Loa snapshot by default, or downloads the current NOAA file with
``--fetch``. Single-table commands print CSV (or JSON with
``--format json``) to stdout unless ``--out`` names a file; ``keeling``
writes one file per figure under the ``--out`` prefix.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import FilterSpec, apply_filter, build_coefficient_bank
from .diagnostics import normal_plot_data, polynomial_noise_oracle, variance_ratio_test
from .exceptions import PipelineError, SavgolError
from .keeling.analysis import PRE_INDUSTRIAL_PPM, run_pipeline
from .keeling.data import NOAA_ANNUAL_URL, fetch_noaa, load_snapshot, parse_noaa_csv
from .keeling.emit import emit
from .noise import estimate_noise_floor, residual_sd, select_m, sweep_residual_sd, unbias
from .uncertainty import bands, monte_carlo_validate, output_sd

log = logging.getLogger("savgol_ci")


def _load(args):
    if args.fetch:
        return fetch_noaa(args.url)
    if args.input:
        path = Path(args.input)
        return parse_noaa_csv(path.read_bytes(), source=str(path))
    return load_snapshot()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_table(args, columns, rows, meta=None):
    rows = [list(r) for r in rows]
    if args.format == "json":
        doc = {
            "columns": list(columns),
            "rows": [[None if v is None else v.item() if hasattr(v, "item") else v for v in r] for r in rows],
        }
        if meta:
            doc["metadata"] = meta
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        lines = [",".join(columns)] + [",".join(_fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_m(args, series, n):
    """Use --m when given, otherwise select it from the sweep."""
    if args.m is not None:
        return args.m
    p = min(args.max_m, (len(series) - 1) // 2)
    table = sweep_residual_sd(n, p, series.values)
    m = select_m(table, estimate_noise_floor(table))
    log.info("selected m = %d for n = %d", m, n)
    return m


def cmd_filter(args):
    series = _load(args)
    n = args.n[0]
    spec = FilterSpec(n, _resolve_m(args, series, n))
    f = apply_filter(spec, series.values)
    rows = zip(series.years, series.values, f.yf, f.dyf)
    _write_table(args, ("year", "y", "yf", "dyf"), rows, {"n": spec.n, "m": spec.m})


def cmd_sweep(args):
    series = _load(args)
    p = min(args.max_m, (len(series) - 1) // 2)
    rows = []
    for n in args.n:
        table = sweep_residual_sd(n, p, series.values)
        rows += [(n, m, a, b) for m, a, b in table.rows]
    _write_table(args, ("n", "m", "sd_a", "sd_b"), rows)


def cmd_select(args):
    series = _load(args)
    p = min(args.max_m, (len(series) - 1) // 2)
    rows = []
    for n in args.n:
        table = sweep_residual_sd(n, p, series.values)
        floor = estimate_noise_floor(table)
        m = select_m(table, floor)
        spec = FilterSpec(n, m)
        yf = apply_filter(spec, series.values).yf
        biased = residual_sd(series.values, yf, spec)
        rows.append(
            (n, m, floor.sd, floor.m_range[0], floor.m_range[1], biased.sd, unbias(biased).sd)
        )
    _write_table(
        args,
        ("n", "m", "noise_floor", "plateau_m_lo", "plateau_m_hi", "residual_sd", "residual_sd_unbiased"),
        rows,
    )


def cmd_ci(args):
    series = _load(args)
    n = args.n[0]
    spec = FilterSpec(n, _resolve_m(args, series, n))
    f = apply_filter(spec, series.values)
    noise = unbias(residual_sd(series.values, f.yf, spec))
    b = bands(f, output_sd(build_coefficient_bank(spec), noise, len(series)), args.level)
    rows = zip(series.years, f.yf, b.syf, b.yf_lo, b.yf_hi, f.dyf, b.sdyf, b.dyf_lo, b.dyf_hi)
    _write_table(
        args,
        ("year", "yf", "syf", "yf_lo", "yf_hi", "dyf", "sdyf", "dyf_lo", "dyf_hi"),
        rows,
        {"n": spec.n, "m": spec.m, "sigma_e": noise.sd, "level": b.level, "z": b.z},
    )


def cmd_montecarlo(args):
    series = _load(args)
    n = args.n[0]
    spec = FilterSpec(n, _resolve_m(args, series, n))
    sigma = args.sigma
    if sigma is None:
        yf = apply_filter(spec, series.values).yf
        sigma = unbias(residual_sd(series.values, yf, spec)).sd
    mc = monte_carlo_validate(spec, series.values, sigma, args.trials, args.seed, args.level)
    rows = zip(series.years, mc.sd_dyf, mc.analytic_dyf, mc.sd_yf, mc.analytic_yf, mc.coverage_yf)
    _write_table(
        args,
        ("year", "sd_dyf_empirical", "sd_dyf_analytic", "sd_yf_empirical", "sd_yf_analytic", "coverage_yf"),
        rows,
        {"n": spec.n, "m": spec.m, "sigma": sigma, "trials": mc.trials, "seed": mc.seed},
    )


def cmd_diagnose(args):
    series = _load(args)
    n = args.n[0]
    spec = FilterSpec(n, _resolve_m(args, series, n))
    yf = apply_filter(spec, series.values).yf
    resid = series.values - yf
    noise = unbias(residual_sd(series.values, yf, spec))
    vt = variance_ratio_test(resid)
    pp = normal_plot_data(resid, noise)
    oracle = polynomial_noise_oracle(series.values, range(2, min(20, len(series) - 2) + 1))
    rows = [
        ("n", spec.n),
        ("m", spec.m),
        ("residual_sd_unbiased", noise.sd),
        ("variance_ratio", vt.ratio),
        ("variance_ratio_n1", vt.n1),
        ("variance_ratio_n2", vt.n2),
        ("variance_ratio_p_value", vt.p_value),
        ("variance_ratio_lower_95", vt.lower),
        ("variance_ratio_upper_95", vt.upper),
        ("variance_ratio_pass_95", int(vt.pass_95)),
        ("normal_plot_max_deviation", pp.max_deviation()),
        ("polynomial_oracle_min_sd", oracle.min_sd),
        ("polynomial_oracle_min_degree", oracle.argmin_degree),
    ]
    _write_table(args, ("quantity", "value"), rows)


def cmd_keeling(args):
    series = _load(args)
    bundle = run_pipeline(
        series,
        n_candidates=args.n,
        p=args.max_m,
        level=args.level,
        report_n=args.report_n,
        seed=args.seed,
        trials=args.trials,
        m=args.m,
        baseline=args.baseline,
        anthropogenic_order=args.order,
        mc_sigma=args.sigma,
    )
    out = args.out or "keeling_output/"
    paths = emit(bundle, args.format, out)
    s = bundle.summary()
    print(
        f"n={bundle.spec.n} m={bundle.spec.m}  residual SD {s['residual_sd_biased']:.3f} "
        f"(unbiased {s['residual_sd_unbiased']:.3f}) ppm; selected m "
        + ", ".join(f"n={k}: {v}" for k, v in s["selected_m"].items())
    )
    if "anthropogenic" in s:
        a = s["anthropogenic"]
        print(
            f"mean fractional rate {a['mean_frac_rate']:.4f}/yr, "
            f"doubling period {a['doubling_period']:.1f} yr"
        )
    print(f"wrote {len(paths)} files under {Path(paths[0]).parent}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--input", help="annual-mean CSV file (default: vendored snapshot)")
    src.add_argument("--fetch", action="store_true", help="download the current NOAA file")
    src.add_argument("--url", default=NOAA_ANNUAL_URL, help="URL used with --fetch")
    opt = common.add_argument_group("filter")
    opt.add_argument("--n", type=int, nargs="+", default=None, help="polynomial parameter count(s)")
    opt.add_argument("--m", type=int, default=None, help="half-window (default: selected)")
    opt.add_argument("--max-m", type=int, default=25, help="largest half-window in sweeps")
    opt.add_argument("--level", type=float, default=0.95, help="confidence level")
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--trials", type=int, default=1000)
    opt.add_argument("--sigma", type=float, default=None, help="Monte Carlo noise SD")
    opt.add_argument("--baseline", type=float, default=PRE_INDUSTRIAL_PPM)
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("csv", "json"), default="csv")
    out.add_argument("--out", default=None, help="output file (or prefix for keeling)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="savgol-ci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "filter": (cmd_filter, "smoothed values and derivatives"),
        "sweep": (cmd_sweep, "residual SDs against m"),
        "select": (cmd_select, "noise floor and selected m"),
        "ci": (cmd_ci, "confidence bands"),
        "montecarlo": (cmd_montecarlo, "Monte Carlo check of the bands"),
        "diagnose": (cmd_diagnose, "residual diagnostics"),
        "keeling": (cmd_keeling, "full analysis with figure tables"),
    }
    for name, (func, help_) in commands.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        if name == "keeling":
            p.add_argument("--report-n", type=int, default=5)
            p.add_argument(
                "--order",
                choices=("log-first", "filter-first"),
                default="log-first",
                help="filter ln(y - baseline), or filter y then transform",
            )
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if args.n is None:
        args.n = [3, 5, 7] if args.command in ("sweep", "select", "keeling") else [5]
    try:
        args.func(args)
    except PipelineError as exc:
        print(f"savgol-ci {args.command}: error {exc}", file=sys.stderr)
        return 1
    except (SavgolError, ValueError, OSError) as exc:
        print(f"savgol-ci {args.command}: error [{args.command}] {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

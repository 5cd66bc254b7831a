"""Command line interface: single-stage subcommands plus a pipeline runner.

The `run` subcommand reads trades, builds bars and standardized returns,
fits both tail exponents, measures the long-memory decay of absolute
returns with jackknife errors, computes daily realized volatility with
whiteness diagnostics, and writes every table as plain CSV/JSON so the
numbers can be re-derived stage by stage. Output is byte-deterministic for
identical inputs and configuration.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import ingest, memory, returns, rv, scaling, synth
from .serialize import write_json

OUTDIR_ENV = "STYLEFACTS_OUTDIR"

SIDE_SHORT = {"positive": "pos", "negative": "neg"}


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"error in stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


@dataclass
class RunConfig:
    """Pipeline settings; defaults follow the bundled analysis conventions."""

    input: str = ""
    outdir: str = ""
    period: str = "none"  # none | I | II | full
    begin: int | None = None
    end: int | None = None
    bar_interval: int = 60
    bar_price: str = "close"
    tail_regions: list | None = None  # None: [2,20], or [1,10] for period "full"
    tail_sides: list = field(default_factory=lambda: ["positive", "negative"])
    acf_max_lag: int = 10_000  # 0 disables the stage
    acf_fit_regions: list = field(default_factory=lambda: [(3, 500), (1500, 10_000)])
    acf_sigma_lags: list = field(default_factory=lambda: [100, 1000])
    jackknife_blocks: int = 50
    rv: bool = True
    threads: int = 1
    seed: int | None = None  # provenance passthrough for synthetic inputs

    def resolved_tail_regions(self) -> list:
        if self.tail_regions is not None:
            return self.tail_regions
        return [(1.0, 10.0)] if self.period == "full" else [(2.0, 20.0)]

    def time_range(self):
        if self.begin is not None or self.end is not None:
            if self.begin is None or self.end is None:
                raise ValueError("begin and end must be given together")
            return (self.begin, self.end)
        if self.period and self.period != "none":
            return returns.period_bounds(self.period)
        return None


# --------------------------------------------------------------------------
# Config-file and flag parsing helpers
# --------------------------------------------------------------------------


def _parse_time(text: str) -> int:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        dt = datetime.strptime(text, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    except ValueError:
        raise ValueError(f"cannot parse time {text!r}; use Unix seconds or YYYY-MM-DD") from None
    return int(dt.timestamp())


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "on", "yes"):
        return True
    if low in ("0", "false", "off", "no"):
        return False
    raise ValueError(f"cannot parse boolean {text!r}")


def _parse_regions(text: str, integer: bool = False) -> list:
    regions = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        lo, _, hi = item.partition(":")
        cast = int if integer else float
        regions.append((cast(lo), cast(hi)))
    return regions


def _parse_int_list(text: str) -> list:
    return [int(s) for s in text.split(",") if s.strip()]


def _parse_sides(text: str) -> list:
    sides = [s.strip() for s in text.split(",") if s.strip()]
    for side in sides:
        if side not in scaling.SIDES:
            raise ValueError(f"unknown side {side!r}")
    return sides


_CONFIG_PARSERS = {
    "input": str,
    "outdir": str,
    "period": str,
    "begin": _parse_time,
    "end": _parse_time,
    "bar_interval": int,
    "bar_price": str,
    "tail_regions": _parse_regions,
    "tail_sides": _parse_sides,
    "acf_max_lag": int,
    "acf_fit_regions": lambda s: _parse_regions(s, integer=True),
    "acf_sigma_lags": _parse_int_list,
    "jackknife_blocks": int,
    "rv": _parse_bool,
    "threads": int,
    "seed": int,
}


def load_config_file(path) -> dict:
    """Flat `key = value` file; '#' starts a comment, unknown keys are errors."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _CONFIG_PARSERS[key](val.strip())
    return values


def build_run_config(args) -> RunConfig:
    cfg = RunConfig()
    settings = load_config_file(args.config) if args.config else {}
    overrides = {
        "input": args.input,
        "outdir": args.outdir,
        "period": args.period,
        "begin": _parse_time(args.begin) if args.begin else None,
        "end": _parse_time(args.end) if args.end else None,
        "bar_interval": args.bar_interval,
        "bar_price": args.bar_price,
        "tail_regions": _parse_regions(args.tail_regions) if args.tail_regions else None,
        "tail_sides": _parse_sides(args.tail_sides) if args.tail_sides else None,
        "acf_max_lag": args.acf_max_lag,
        "acf_fit_regions": _parse_regions(args.acf_fit_regions, integer=True)
        if args.acf_fit_regions is not None
        else None,
        "acf_sigma_lags": _parse_int_list(args.acf_sigma_lags)
        if args.acf_sigma_lags is not None
        else None,
        "jackknife_blocks": args.jackknife_blocks,
        "rv": _parse_bool(args.rv) if args.rv else None,
        "threads": args.threads,
        "seed": args.seed,
    }
    for key, val in settings.items():
        setattr(cfg, key, val)
    for key, val in overrides.items():
        if val is not None:
            setattr(cfg, key, val)
    if not cfg.input:
        raise ValueError("no input file configured")
    if not cfg.outdir:
        cfg.outdir = os.environ.get(OUTDIR_ENV, "out")
    return cfg


# --------------------------------------------------------------------------
# Pipeline
# --------------------------------------------------------------------------


def _region_tag(region) -> str:
    return f"{region[0]:g}-{region[1]:g}"


def run_pipeline(cfg: RunConfig) -> dict:
    """Execute all configured stages, write the output bundle, return the summary."""
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    t_range = cfg.time_range()

    with _stage("ingest"):
        parsed = ingest.parse_ticks(cfg.input)
        bars = ingest.build_bars(parsed.records, cfg.bar_interval, t_range, cfg.bar_price)
        ingest.write_bars(bars, outdir / "bars.csv")

    with _stage("returns"):
        std = returns.standardize(returns.log_returns(bars))
        returns.write_returns(std, outdir / "returns.csv")

    with _stage("tails"):
        regions = cfg.resolved_tail_regions()
        sides = cfg.tail_sides
        if cfg.threads > 1 and len(sides) > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                ccdfs = dict(zip(sides, pool.map(lambda s: scaling.ccdf(std, s), sides)))
        else:
            ccdfs = {side: scaling.ccdf(std, side) for side in sides}
        tail_fits = []
        for side in sides:
            short = SIDE_SHORT[side]
            scaling.write_ccdf(ccdfs[side], outdir / f"ccdf_{short}.csv")
            for region in regions:
                fit = scaling.fit_tail(ccdfs[side], region)
                tail_fits.append(fit)
                tag = _region_tag(region)
                write_json(fit.to_dict(), outdir / f"tail_fit_{short}_{tag}.json")
                overlay = f"fit_{short}.csv" if len(regions) == 1 else f"fit_{short}_{tag}.csv"
                scaling.write_fit_overlay(fit, outdir / overlay)

    acf_fits = []
    acf_n = None
    if cfg.acf_max_lag > 0:
        with _stage("acf"):
            est = memory.acf_with_errors(
                np.abs(std.values), cfg.acf_max_lag, cfg.acf_sigma_lags, cfg.jackknife_blocks
            )
            acf_n = est.n
            memory.write_acf(est, outdir / "acf_abs.csv")
            for region in cfg.acf_fit_regions:
                fit = memory.fit_acf_powerlaw(est, region)
                acf_fits.append(fit)
                write_json(fit.to_dict(), outdir / f"acf_fit_{_region_tag(region)}.json")

    rv_summary = None
    if cfg.rv:
        with _stage("rv"):
            bars_rv = ingest.build_bars(parsed.records, rv.RV_BAR_SECONDS, t_range, cfg.bar_price)
            rvs = rv.realized_volatility(bars_rv)
            rv.write_rv(rvs, outdir / "rv.csv")
            standardized = rv.standardize_by_rv(rvs)
            report = rv.whiteness_check(standardized.values)
            write_json(report.to_dict(), outdir / "whiteness.json")
            rv_summary = {
                "n_days": int(rvs.days.size),
                "zero_rv_days": standardized.n_excluded,
                "whiteness": report.to_dict(),
            }

    summary = {
        "config": {
            "input": cfg.input,
            "period": cfg.period,
            "begin": cfg.begin,
            "end": cfg.end,
            "bar_interval": cfg.bar_interval,
            "bar_price": cfg.bar_price,
            "seed": cfg.seed,
        },
        "ticks": {"n": len(parsed.records), "skipped": parsed.skipped},
        "bars": {
            "n": len(bars),
            "n_filled": int(bars.fill_flags.sum()),
            "start": bars.start,
            "interval": bars.interval,
        },
        "returns": {"n": len(std), "mean": std.mean_used, "sd": std.sd_used},
        "tail_fits": [fit.to_dict() for fit in tail_fits],
        "acf_fits": [fit.to_dict() for fit in acf_fits],
        "acf_n": acf_n,
        "rv": rv_summary,
    }
    with _stage("write"):
        write_json(summary, outdir / "summary.json")
    return summary


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def _range_from_args(args):
    if args.begin or args.end:
        if not (args.begin and args.end):
            raise ValueError("begin and end must be given together")
        return (_parse_time(args.begin), _parse_time(args.end))
    if args.period and args.period != "none":
        return returns.period_bounds(args.period)
    return None


def cmd_ingest(args) -> int:
    parsed = ingest.parse_ticks(args.input)
    print(f"parsed {len(parsed.records)} ticks ({parsed.skipped} lines skipped)", file=sys.stderr)
    bars = ingest.build_bars(parsed.records, args.interval, _range_from_args(args), args.price)
    ingest.write_bars(bars, args.out)
    print(f"wrote {len(bars)} bars to {args.out}", file=sys.stderr)
    return 0


def cmd_returns(args) -> int:
    bars = ingest.read_bars(args.input)
    series = returns.log_returns(bars)
    if args.standardize:
        series = returns.standardize(series)
    returns.write_returns(series, args.out)
    print(f"wrote {len(series)} returns to {args.out}", file=sys.stderr)
    return 0


def _load_standardized(path, assume_standardized: bool):
    series = returns.read_returns(path, standardized=assume_standardized)
    if not series.standardized:
        series = returns.standardize(series)
    return series


def cmd_tails(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    std = _load_standardized(args.input, args.assume_standardized)
    regions = _parse_regions(args.regions)
    for side in _parse_sides(args.sides):
        short = SIDE_SHORT[side]
        points = scaling.ccdf(std, side, min_count=args.min_count)
        if args.log_bins:
            points = scaling.log_binned(points, args.log_bins)
        scaling.write_ccdf(points, outdir / f"ccdf_{short}.csv")
        for region in regions:
            fit = scaling.fit_tail(points, region)
            tag = _region_tag(region)
            write_json(fit.to_dict(), outdir / f"tail_fit_{short}_{tag}.json")
            overlay = f"fit_{short}.csv" if len(regions) == 1 else f"fit_{short}_{tag}.csv"
            scaling.write_fit_overlay(fit, outdir / overlay)
            print(f"{side} tail, region {tag}: mu={fit.mu:.4f} (stderr {fit.stderr_mu:.4f})", file=sys.stderr)
    return 0


def cmd_acf(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    series = _load_standardized(args.input, args.assume_standardized)
    data = np.abs(series.values) if args.absolute else series.values
    sigma_lags = _parse_int_list(args.sigma_lags) if args.sigma_lags else []
    est = memory.acf_with_errors(data, args.max_lag, sigma_lags, args.blocks)
    name = "acf_abs.csv" if args.absolute else "acf.csv"
    memory.write_acf(est, outdir / name)
    for region in _parse_regions(args.fit_regions, integer=True) if args.fit_regions else []:
        fit = memory.fit_acf_powerlaw(est, region)
        write_json(fit.to_dict(), outdir / f"acf_fit_{_region_tag(region)}.json")
        print(f"ACF region {_region_tag(region)}: exponent={fit.exponent:.4f}", file=sys.stderr)
    return 0


def cmd_rv(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    parsed = ingest.parse_ticks(args.input)
    bars = ingest.build_bars(parsed.records, rv.RV_BAR_SECONDS, _range_from_args(args))
    rvs = rv.realized_volatility(bars)
    rv.write_rv(rvs, outdir / "rv.csv")
    standardized = rv.standardize_by_rv(rvs)
    report = rv.whiteness_check(standardized.values)
    write_json(report.to_dict(), outdir / "whiteness.json")
    print(
        f"{rvs.days.size} days ({standardized.n_excluded} zero-RV days excluded), "
        f"band fraction {report.band_fraction:.3f}",
        file=sys.stderr,
    )
    return 0


def cmd_synth(args) -> int:
    params = {}
    for key in synth.MODEL_PARAMS.get(args.model, ()):
        val = getattr(args, key)
        if val is None:
            raise ValueError(f"model {args.model!r} requires --{key.replace('_', '-')}")
        params[key] = val
    spec = synth.SyntheticSpec(model=args.model, n=args.n, seed=args.seed, params=params)
    values = synth.generate(spec)
    if args.as_ticks:
        bars = synth.price_bars(values * args.scale, args.interval, args.start, args.p0)
        ingest.write_ticks(synth.bars_to_ticks(bars), args.out)
        print(f"wrote {len(bars)} synthetic ticks to {args.out}", file=sys.stderr)
    else:
        series = returns.ReturnSeries(values, interval=args.interval, start=args.start + args.interval)
        returns.write_returns(series, args.out)
        print(f"wrote {len(series)} synthetic returns to {args.out}", file=sys.stderr)
    return 0


def cmd_run(args) -> int:
    cfg = build_run_config(args)
    summary = run_pipeline(cfg)
    n_fits = len(summary["tail_fits"])
    print(f"pipeline complete: {n_fits} tail fits, outputs in {cfg.outdir}", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------


def _add_range_flags(p) -> None:
    p.add_argument("--period", default=None, help="named period: I, II, full, or none")
    p.add_argument("--begin", default=None, help="range start (Unix seconds or YYYY-MM-DD)")
    p.add_argument("--end", default=None, help="range end, exclusive")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stylefacts", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse ticks and write a bar CSV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--interval", type=int, default=60)
    p.add_argument("--price", default="close", choices=("close", "mean", "median"))
    _add_range_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("returns", help="log returns from a bar CSV")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--standardize", action="store_true")
    p.set_defaults(func=cmd_returns)

    p = sub.add_parser("tails", help="tail CCDFs and power-law fits from a returns CSV")
    p.add_argument("input")
    p.add_argument("--outdir", default=os.environ.get(OUTDIR_ENV, "out"))
    p.add_argument("--regions", default="2:20", help="comma-separated lo:hi list")
    p.add_argument("--sides", default="positive,negative")
    p.add_argument("--min-count", type=int, default=100)
    p.add_argument("--log-bins", type=int, default=0, help="optional log-binning bin count")
    p.add_argument("--assume-standardized", action="store_true")
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("acf", help="autocorrelation of (absolute) returns")
    p.add_argument("input")
    p.add_argument("--outdir", default=os.environ.get(OUTDIR_ENV, "out"))
    p.add_argument("--max-lag", type=int, default=1000)
    p.add_argument("--absolute", action="store_true", help="use absolute returns")
    p.add_argument("--fit-regions", default=None, help="comma-separated lo:hi list")
    p.add_argument("--sigma-lags", default=None, help="lags for jackknife errors")
    p.add_argument("--blocks", type=int, default=50)
    p.add_argument("--assume-standardized", action="store_true")
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser("rv", help="daily realized volatility from ticks")
    p.add_argument("input")
    p.add_argument("--outdir", default=os.environ.get(OUTDIR_ENV, "out"))
    _add_range_flags(p)
    p.set_defaults(func=cmd_rv)

    p = sub.add_parser("synth", help="seeded synthetic returns or ticks")
    p.add_argument("--model", required=True, choices=sorted(synth.MODEL_PARAMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--log-vol-mean", dest="log_vol_mean", type=float, default=None)
    p.add_argument("--phi", type=float, default=None)
    p.add_argument("--vol-of-vol", dest="vol_of_vol", type=float, default=None)
    p.add_argument("--as-ticks", action="store_true", help="emit a tick CSV instead of returns")
    p.add_argument("--interval", type=int, default=60)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--p0", type=float, default=100.0)
    p.add_argument("--scale", type=float, default=0.001, help="return scale for price paths")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="full pipeline from a config file plus overrides")
    p.add_argument("--config", default=None)
    p.add_argument("--input", default=None)
    p.add_argument("--outdir", default=None)
    p.add_argument("--bar-interval", dest="bar_interval", type=int, default=None)
    p.add_argument("--bar-price", dest="bar_price", default=None)
    p.add_argument("--tail-regions", dest="tail_regions", default=None)
    p.add_argument("--tail-sides", dest="tail_sides", default=None)
    p.add_argument("--acf-max-lag", dest="acf_max_lag", type=int, default=None)
    p.add_argument("--acf-fit-regions", dest="acf_fit_regions", default=None)
    p.add_argument("--acf-sigma-lags", dest="acf_sigma_lags", default=None)
    p.add_argument("--jackknife-blocks", dest="jackknife_blocks", type=int, default=None)
    p.add_argument("--rv", default=None, help="on/off")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    _add_range_flags(p)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

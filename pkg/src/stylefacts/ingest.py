"""Trade-file parsing and resampling into uniformly spaced price bars.

Input files are newline-delimited CSV trades, by default in the
`unixtime,price,volume` layout used by public tick-data archives. Bad lines
are skipped and counted rather than aborting the parse. Bars carry the last
trade price of each interval; intervals without trades are forward-filled
and flagged so downstream code can tell real closes from carried ones.
"""

import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .serialize import fmt_float


class TickRecord(NamedTuple):
    """One trade."""

    timestamp: int  # Unix seconds, UTC
    price: float  # quote-currency units, > 0
    volume: float  # base-asset units, >= 0


@dataclass(frozen=True)
class TickFormat:
    """Column layout of a tick CSV."""

    delimiter: str = ","
    time_col: int = 0
    price_col: int = 1
    volume_col: int = 2
    n_fields: int = 3


#: Default layout: `unixtime,price,volume`, no header.
TICK_CSV = TickFormat()


@dataclass
class ParseResult:
    records: list
    skipped: int


@dataclass
class BarSeries:
    """Uniformly spaced price series; bar i covers [start + i*interval, start + (i+1)*interval)."""

    start: int  # Unix seconds, multiple of interval
    interval: int  # seconds
    prices: np.ndarray  # closing price per bar, > 0
    fill_flags: np.ndarray  # True where no trade occurred and the price was carried

    def __post_init__(self):
        self.prices = np.asarray(self.prices, dtype=float)
        self.fill_flags = np.asarray(self.fill_flags, dtype=bool)
        if self.interval <= 0:
            raise ValueError("interval must be positive")
        if self.start % self.interval != 0:
            raise ValueError("start must be aligned to the bar interval")
        if self.prices.size < 2:
            raise ValueError("need at least 2 bars")
        if self.prices.size != self.fill_flags.size:
            raise ValueError("prices and fill_flags length mismatch")
        if not np.all(self.prices > 0):
            raise ValueError("bar prices must be positive")

    def __len__(self) -> int:
        return self.prices.size

    def timestamps(self) -> np.ndarray:
        return self.start + self.interval * np.arange(self.prices.size, dtype=np.int64)


def _iter_lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from fh
    elif isinstance(source, bytes):
        yield from source.splitlines()
    else:
        yield from source


def parse_ticks(source, fmt: TickFormat = TICK_CSV) -> ParseResult:
    """Parse a tick stream into timestamp-ordered records.

    `source` may be a path, a bytes blob, or an iterable of lines. Lines with
    the wrong field count, non-numeric fields, non-positive prices, or
    negative volumes are skipped and counted. Raises if the input holds no
    lines at all.
    """
    records: list = []
    skipped = 0
    saw_content = False
    max_col = max(fmt.time_col, fmt.price_col, fmt.volume_col)
    for raw in _iter_lines(source):
        line = raw.decode("utf-8", "replace") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line:
            continue
        saw_content = True
        parts = line.split(fmt.delimiter)
        if len(parts) != fmt.n_fields or max_col >= len(parts):
            skipped += 1
            continue
        try:
            ts = int(float(parts[fmt.time_col]))
            price = float(parts[fmt.price_col])
            volume = float(parts[fmt.volume_col])
        except ValueError:
            skipped += 1
            continue
        if not np.isfinite(price) or not np.isfinite(volume) or price <= 0.0 or volume < 0.0:
            skipped += 1
            continue
        records.append(TickRecord(ts, price, volume))
    if not saw_content:
        raise ValueError("no records")
    # Stable sort keeps file order for equal timestamps, so the last record
    # written for a second remains the closing trade of that second.
    if any(records[i].timestamp < records[i - 1].timestamp for i in range(1, len(records))):
        records.sort(key=lambda r: r.timestamp)
    return ParseResult(records, skipped)


def write_ticks(records: Sequence[TickRecord], path) -> None:
    """Write records in the default `unixtime,price,volume` layout."""
    with open(path, "w", newline="") as fh:
        for rec in records:
            fh.write(f"{rec.timestamp},{fmt_float(rec.price)},{fmt_float(rec.volume)}\n")


def _aggregate_bars(idx, ps, first, n_bars, how):
    agg = np.median if how == "median" else np.mean
    vals = np.full(n_bars, np.nan)
    occupied = np.flatnonzero(np.bincount(idx, minlength=n_bars) > 0)
    starts = np.searchsorted(idx, occupied, side="left")
    ends = np.searchsorted(idx, occupied, side="right")
    for b, lo, hi in zip(occupied, starts, ends):
        vals[b] = agg(ps[lo:hi])
    carry = np.where(~np.isnan(vals), np.arange(n_bars), -1)
    np.maximum.accumulate(carry, out=carry)
    return vals[carry[first:]]


def build_bars(
    ticks: Sequence[TickRecord],
    interval: int,
    t_range: tuple | None = None,
    price: str = "close",
) -> BarSeries:
    """Resample sorted ticks into a BarSeries.

    Each bar takes the last trade price in its interval (`price` may also be
    "mean" or "median" of the interval's trades). Intervals without trades
    carry the previous price and are flagged as filled. Bars before the first
    trade are dropped. With `t_range` = [t_begin, t_end), the grid is clipped
    to those bounds (aligned outward to the interval) and forward-filled up
    to the end.
    """
    if interval <= 0:
        raise ValueError("interval must be positive")
    if len(ticks) == 0:
        raise ValueError("no records")
    if price not in ("close", "mean", "median"):
        raise ValueError(f"unknown bar price mode {price!r}")
    ts = np.fromiter((t.timestamp for t in ticks), np.int64, count=len(ticks))
    ps = np.fromiter((t.price for t in ticks), np.float64, count=len(ticks))
    if np.any(np.diff(ts) < 0):
        raise ValueError("ticks not sorted")
    if t_range is not None:
        t0, t1 = int(t_range[0]), int(t_range[1])
        if t1 <= t0:
            raise ValueError("empty time range")
        grid0 = (t0 // interval) * interval
        grid1 = -(-t1 // interval) * interval
        keep = (ts >= grid0) & (ts < grid1)
        if not keep.any():
            raise ValueError("no records in range")
        ts, ps = ts[keep], ps[keep]
    else:
        grid0 = int(ts[0] // interval) * interval
        grid1 = int(ts[-1] // interval) * interval + interval
    idx = (ts - grid0) // interval
    n_bars = (grid1 - grid0) // interval
    first = int(idx[0])
    has_tick = np.zeros(n_bars, dtype=bool)
    has_tick[idx] = True
    if price == "close":
        pos = np.searchsorted(idx, np.arange(first, n_bars), side="right") - 1
        bar_prices = ps[pos]
    else:
        bar_prices = _aggregate_bars(idx, ps, first, n_bars, price)
    return BarSeries(
        start=int(grid0 + first * interval),
        interval=int(interval),
        prices=bar_prices,
        fill_flags=~has_tick[first:],
    )


def slice_bars(bars: BarSeries, t_begin: int, t_end: int) -> BarSeries:
    """Restrict a BarSeries to bars whose interval starts in [t_begin, t_end)."""
    ts = bars.timestamps()
    keep = (ts >= t_begin) & (ts < t_end)
    n = int(keep.sum())
    if n < 2:
        raise ValueError("no bars in range")
    i0 = int(np.argmax(keep))
    return BarSeries(
        start=int(ts[i0]),
        interval=bars.interval,
        prices=bars.prices[i0 : i0 + n],
        fill_flags=bars.fill_flags[i0 : i0 + n],
    )


def write_bars(bars: BarSeries, path) -> None:
    """Serialize bars as CSV with header `timestamp,price,filled`."""
    with open(path, "w", newline="") as fh:
        fh.write("timestamp,price,filled\n")
        for t, p, f in zip(bars.timestamps(), bars.prices, bars.fill_flags):
            fh.write(f"{int(t)},{fmt_float(p)},{int(f)}\n")


def read_bars(path) -> BarSeries:
    """Read a CSV produced by :func:`write_bars`."""
    ts: list = []
    prices: list = []
    flags: list = []
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != "timestamp,price,filled":
            raise ValueError(f"unexpected bars header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, p, f = line.split(",")
            ts.append(int(t))
            prices.append(float(p))
            flags.append(bool(int(f)))
    if len(ts) < 2:
        raise ValueError("need at least 2 bars")
    ts_arr = np.asarray(ts, dtype=np.int64)
    steps = np.diff(ts_arr)
    if np.any(steps != steps[0]):
        raise ValueError("bar timestamps are not uniformly spaced")
    return BarSeries(start=int(ts_arr[0]), interval=int(steps[0]), prices=np.asarray(prices), fill_flags=np.asarray(flags))

"""Log returns and mean/standard-deviation standardization of bar series."""

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .ingest import BarSeries
from .serialize import fmt_float


@dataclass
class ReturnSeries:
    """Log returns at a fixed interval, optionally standardized.

    `mean_used` and `sd_used` record the location/scale removed by the last
    standardization (0 and 1 for raw series). `start` is the timestamp of
    the bar closing the first return; None for synthetic series without a
    time axis.
    """

    values: np.ndarray
    interval: int
    standardized: bool = False
    mean_used: float = 0.0
    sd_used: float = 1.0
    start: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()

    def __len__(self) -> int:
        return self.values.size

    def timestamps(self) -> np.ndarray:
        t0 = self.interval if self.start is None else self.start
        return t0 + self.interval * np.arange(self.values.size, dtype=np.int64)


# Calendar windows (UTC, half-open) separating the low- and high-liquidity
# regimes of the bundled analysis defaults.
PERIODS = {
    "I": ((2011, 9, 11), (2014, 1, 1)),
    "II": ((2015, 1, 1), (2020, 6, 22)),
    "full": ((2011, 9, 11), (2020, 6, 22)),
}


def period_bounds(name: str) -> tuple:
    """Unix-second bounds [t0, t1) of a named dataset period."""
    try:
        (y0, m0, d0), (y1, m1, d1) = PERIODS[name]
    except KeyError:
        raise ValueError(f"unknown period {name!r}; expected one of {sorted(PERIODS)}") from None
    t0 = datetime(y0, m0, d0, tzinfo=timezone.utc).timestamp()
    t1 = datetime(y1, m1, d1, tzinfo=timezone.utc).timestamp()
    return int(t0), int(t1)


def log_returns(bars: BarSeries) -> ReturnSeries:
    """Per-bar log price changes: value[t-1] = log(price[t]) - log(price[t-1])."""
    vals = np.diff(np.log(bars.prices))
    return ReturnSeries(vals, bars.interval, start=bars.start + bars.interval)


def standardize(r: ReturnSeries) -> ReturnSeries:
    """Remove the sample mean and divide by the sample standard deviation.

    The scale uses the N-1 denominator, so the output has sample mean 0 and
    sample standard deviation 1. Raises on constant input.
    """
    v = r.values
    if v.size < 2:
        raise ValueError("need at least 2 returns")
    nu = float(v.mean())
    sd = float(v.std(ddof=1))
    if sd == 0.0:
        raise ValueError("degenerate series")
    return ReturnSeries(
        (v - nu) / sd,
        r.interval,
        standardized=True,
        mean_used=nu,
        sd_used=sd,
        start=r.start,
    )


def write_returns(r: ReturnSeries, path) -> None:
    """Serialize returns as CSV with header `timestamp,return`."""
    with open(path, "w", newline="") as fh:
        fh.write("timestamp,return\n")
        for t, v in zip(r.timestamps(), r.values):
            fh.write(f"{int(t)},{fmt_float(v)}\n")


def read_returns(path, standardized: bool = False) -> ReturnSeries:
    """Read a CSV produced by :func:`write_returns`.

    Set `standardized=True` only when the file is known to hold already
    standardized values; the flag is trusted, not re-verified.
    """
    ts: list = []
    vals: list = []
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        if header != "timestamp,return":
            raise ValueError(f"unexpected returns header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, v = line.split(",")
            ts.append(int(t))
            vals.append(float(v))
    if len(ts) < 2:
        raise ValueError("need at least 2 returns")
    interval = ts[1] - ts[0]
    return ReturnSeries(
        np.asarray(vals),
        interval=int(interval),
        standardized=standardized,
        start=int(ts[0]),
    )

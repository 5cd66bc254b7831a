"""Daily realized volatility from 5-minute returns and whiteness diagnostics.

A day's realized variance is the sum of squared 5-minute log returns over
the UTC calendar day; the day's return is the log change between its last
close and the previous day's last close, so the squared contributions and
the daily return are built from the same closes. Dividing daily returns by
the square root of realized variance should leave an uncorrelated,
near-Gaussian residual when returns behave like noise with time-varying
volatility.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ingest import BarSeries
from .memory import acf, ljung_box
from .serialize import fmt_float

SECONDS_PER_DAY = 86_400
RV_BAR_SECONDS = 300
RETURNS_PER_DAY = SECONDS_PER_DAY // RV_BAR_SECONDS  # 288


@dataclass
class RvSeries:
    """Per-day realized variance with the matching daily log returns."""

    days: np.ndarray  # datetime64[D]
    rv: np.ndarray  # sum of squared intraday log returns
    n_intraday: np.ndarray  # intraday return count per day (288 when complete)
    daily_return: np.ndarray


@dataclass
class StandardizedReturns:
    """Daily returns divided by the day's realized volatility."""

    days: np.ndarray
    values: np.ndarray
    n_excluded: int  # zero-RV days dropped


class MomentStats(NamedTuple):
    mean: float
    sd: float
    skewness: float
    excess_kurtosis: float


@dataclass
class WhitenessReport:
    band_fraction: float  # share of lags with |ACF| inside +-2/sqrt(N)
    ljung_box_20: float
    ljung_box_100: float | None  # None when fewer than 100 lags were computed
    n: int

    def to_dict(self) -> dict:
        return {
            "band_fraction": self.band_fraction,
            "ljung_box_20": self.ljung_box_20,
            "ljung_box_100": self.ljung_box_100,
            "n": self.n,
        }


def realized_volatility(bars: BarSeries) -> RvSeries:
    """Realized variance per complete UTC day from 300-second bars.

    A day is complete when all 288 of its 5-minute returns exist, including
    the midnight-crossing return anchored at the previous day's last close;
    incomplete leading/trailing days are dropped.
    """
    if bars.interval != RV_BAR_SECONDS:
        raise ValueError("realized volatility requires 300-second bars")
    ts = bars.timestamps()
    logp = np.log(bars.prices)
    r = np.diff(logp)
    day_ids = ts[1:] // SECONDS_PER_DAY
    uniq, start_idx, counts = np.unique(day_ids, return_index=True, return_counts=True)
    complete = counts == RETURNS_PER_DAY
    if not complete.any():
        raise ValueError("no complete day in range")
    rv_all = np.add.reduceat(r * r, start_idx)
    i0 = start_idx[complete]
    return RvSeries(
        days=uniq[complete].astype("datetime64[D]"),
        rv=rv_all[complete],
        n_intraday=np.full(int(complete.sum()), RETURNS_PER_DAY, dtype=np.int64),
        daily_return=logp[i0 + RETURNS_PER_DAY] - logp[i0],
    )


def standardize_by_rv(rvs: RvSeries) -> StandardizedReturns:
    """Daily return over sqrt(realized variance); zero-RV days are dropped and counted."""
    keep = rvs.rv > 0.0
    n_excluded = int((~keep).sum())
    if not keep.any():
        raise ValueError("all days have zero realized volatility")
    values = rvs.daily_return[keep] / np.sqrt(rvs.rv[keep])
    return StandardizedReturns(days=rvs.days[keep], values=values, n_excluded=n_excluded)


def normality_stats(x) -> MomentStats:
    """Sample mean, standard deviation (N-1), skewness, and excess kurtosis."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size < 30:
        raise ValueError("need at least 30 observations")
    d = x - x.mean()
    m2 = float((d**2).mean())
    if m2 == 0.0:
        raise ValueError("zero variance")
    m3 = float((d**3).mean())
    m4 = float((d**4).mean())
    return MomentStats(
        mean=float(x.mean()),
        sd=float(x.std(ddof=1)),
        skewness=m3 / m2**1.5,
        excess_kurtosis=m4 / m2**2 - 3.0,
    )


def whiteness_check(x) -> WhitenessReport:
    """Autocorrelation diagnostics for |x|: band coverage and Ljung-Box values.

    Computes the ACF of absolute values up to min(200, N/10) lags, then
    reports the fraction of lags inside the +-2/sqrt(N) noise band and the
    Ljung-Box statistic at lags 20 and 100 (the latter None when fewer than
    100 lags fit).
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < 500:
        raise ValueError("need at least 500 observations")
    max_lag = min(200, n // 10)
    est = acf(np.abs(x), max_lag)
    band = 2.0 / np.sqrt(n)
    band_fraction = float(np.mean(np.abs(est.values[1:]) <= band))
    lb20 = ljung_box(est.values, 20, n)
    lb100 = ljung_box(est.values, 100, n) if max_lag >= 100 else None
    return WhitenessReport(band_fraction=band_fraction, ljung_box_20=lb20, ljung_box_100=lb100, n=n)


def write_rv(rvs: RvSeries, path) -> None:
    """Serialize as CSV with header `date,rv,n_intraday,daily_return`."""
    with open(path, "w", newline="") as fh:
        fh.write("date,rv,n_intraday,daily_return\n")
        for day, rv, n_intra, ret in zip(rvs.days, rvs.rv, rvs.n_intraday, rvs.daily_return):
            fh.write(f"{day},{fmt_float(rv)},{int(n_intra)},{fmt_float(ret)}\n")

"""Autocorrelation estimation, delete-block jackknife errors, and power-law
fits of slowly decaying autocorrelations.

The ACF estimator centers and scales by the full-sample mean and variance
and divides each lag-t sum of products by N - t, which keeps ACF(0) = 1
exact. Lag sums are evaluated with an FFT, identical to the direct sums up
to float rounding.
"""

from dataclasses import dataclass

import numpy as np

from ._fit import fit_line
from .serialize import fmt_float


@dataclass
class AcfEstimate:
    """Autocorrelation values at lags 0..max_lag, with optional jackknife sigmas."""

    lags: np.ndarray
    values: np.ndarray
    sigma: np.ndarray | None  # NaN where not computed
    n: int


@dataclass
class AcfPowerLawFit:
    """Slope of log ACF vs log lag over an integer lag region."""

    region: tuple
    exponent: float
    stderr: float

    def to_dict(self) -> dict:
        return {
            "region": [int(self.region[0]), int(self.region[1])],
            "exponent": self.exponent,
            "stderr": self.stderr,
        }


def acf(x, max_lag: int) -> AcfEstimate:
    """Sample autocorrelation of `x` at lags 0..max_lag.

    ACF(t) = [sum_{i} (x_i - m)(x_{i+t} - m) / (N - t)] / var(x), with m and
    var(x) the full-sample mean and (population) variance.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    if n <= max_lag:
        raise ValueError("max_lag must be smaller than the series length")
    var = float(x.var())
    if var == 0.0:
        raise ValueError("zero variance")
    d = x - x.mean()
    nfft = 1 << int(2 * n - 1).bit_length()
    f = np.fft.rfft(d, nfft)
    raw = np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1]
    vals = raw / (var * (n - np.arange(max_lag + 1)))
    vals[0] = 1.0
    return AcfEstimate(lags=np.arange(max_lag + 1), values=vals, sigma=None, n=n)


def _acf_at_lag(x: np.ndarray, lag: int) -> float:
    # Direct single-lag evaluation of the same estimator.
    n = x.size
    var = float(x.var())
    if var == 0.0:
        raise ValueError("zero variance")
    d = x - x.mean()
    return float(d[:-lag] @ d[lag:]) / ((n - lag) * var)


def jackknife_sigma(x, lag: int, n_blocks: int = 50) -> float:
    """Delete-one-block jackknife one-sigma error of ACF(lag).

    The series is cut into `n_blocks` contiguous equal blocks (the tail
    remainder is dropped); ACF(lag) is recomputed with each block removed
    and the spread of those estimates gives the error.
    """
    x = np.asarray(x, dtype=float).ravel()
    if lag < 1:
        raise ValueError("lag must be at least 1")
    if n_blocks < 10:
        raise ValueError("need at least 10 blocks")
    block = x.size // n_blocks
    if block < 10 * lag:
        raise ValueError("blocks too short for lag")
    xs = x[: block * n_blocks]
    thetas = np.empty(n_blocks)
    for b in range(n_blocks):
        loo = np.concatenate((xs[: b * block], xs[(b + 1) * block :]))
        thetas[b] = _acf_at_lag(loo, lag)
    dev = thetas - thetas.mean()
    return float(np.sqrt((n_blocks - 1) / n_blocks * float(dev @ dev)))


def acf_with_errors(x, max_lag: int, sigma_lags=(), n_blocks: int = 50) -> AcfEstimate:
    """ACF plus jackknife sigmas at the requested lags (NaN elsewhere)."""
    est = acf(x, max_lag)
    sigma = np.full(max_lag + 1, np.nan)
    for lag in sigma_lags:
        lag = int(lag)
        if lag < 1 or lag > max_lag:
            raise ValueError(f"sigma lag {lag} outside 1..{max_lag}")
        sigma[lag] = jackknife_sigma(x, lag, n_blocks)
    return AcfEstimate(lags=est.lags, values=est.values, sigma=sigma, n=est.n)


def fit_acf_powerlaw(a: AcfEstimate, region: tuple) -> AcfPowerLawFit:
    """Least-squares line through log ACF(t) vs log t over integer lags in region."""
    t_lo, t_hi = int(region[0]), int(region[1])
    if t_lo < 1:
        raise ValueError("region start must be at least lag 1")
    if t_hi <= t_lo:
        raise ValueError("region must satisfy t_lo < t_hi")
    if t_hi > int(a.lags[-1]):
        raise ValueError("region exceeds computed lags")
    vals = a.values[t_lo : t_hi + 1]
    if np.any(vals <= 0.0):
        raise ValueError("ACF not positive in region")
    lags = np.arange(t_lo, t_hi + 1)
    if lags.size < 3:
        raise ValueError("fewer than 3 lags in fitting region")
    fit = fit_line(np.log(lags), np.log(vals))
    return AcfPowerLawFit(region=(t_lo, t_hi), exponent=fit.slope, stderr=fit.stderr_slope)


def ljung_box(acf_values: np.ndarray, m: int, n: int) -> float:
    """Ljung-Box portmanteau statistic over the first m lags of an ACF."""
    if m < 1 or m >= len(acf_values):
        raise ValueError("m outside the computed lag range")
    h = np.arange(1, m + 1)
    rho = np.asarray(acf_values[1 : m + 1], dtype=float)
    return float(n * (n + 2) * np.sum(rho**2 / (n - h)))


def write_acf(est: AcfEstimate, path) -> None:
    """Serialize as CSV `lag,acf,sigma`; sigma column empty where not computed."""
    sigma = est.sigma
    with open(path, "w", newline="") as fh:
        fh.write("lag,acf,sigma\n")
        for i, (lag, val) in enumerate(zip(est.lags, est.values)):
            if sigma is None or np.isnan(sigma[i]):
                fh.write(f"{int(lag)},{fmt_float(val)},\n")
            else:
                fh.write(f"{int(lag)},{fmt_float(val)},{fmt_float(sigma[i])}\n")

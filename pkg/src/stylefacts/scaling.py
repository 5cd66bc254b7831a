"""Empirical tail distributions of standardized returns and power-law fits.

The complementary CDF of each tail is built from raw (unbinned) magnitudes;
a straight line fitted to the log-log points over a chosen region gives the
tail exponent. A Hill estimator over the top order statistics provides an
independent cross-check on the regression value.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._fit import fit_line
from .returns import ReturnSeries
from .serialize import fmt_float

SIDES = ("positive", "negative")


@dataclass
class CcdfPoints:
    """One tail's empirical complementary CDF on distinct magnitudes."""

    side: str
    x: np.ndarray  # sorted ascending, > 0, in standard-deviation units
    p: np.ndarray  # fraction of the side's observations >= x
    n_side: int


@dataclass
class TailFit:
    """Power-law fit p = kappa * x**(-mu) over one region of a tail CCDF."""

    side: str
    region: tuple
    mu: float
    kappa: float
    stderr_mu: float
    r_squared: float
    n_points: int

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "region": [float(self.region[0]), float(self.region[1])],
            "mu": self.mu,
            "kappa": self.kappa,
            "stderr_mu": self.stderr_mu,
            "r_squared": self.r_squared,
            "n_points": self.n_points,
        }


def _side_magnitudes(r: ReturnSeries, side: str) -> np.ndarray:
    v = r.values
    if side == "positive":
        return v[v > 0.0]
    if side == "negative":
        return -v[v < 0.0]
    raise ValueError(f"unknown side {side!r}; expected 'positive' or 'negative'")


def ccdf(r: ReturnSeries, side: str, min_count: int = 100) -> CcdfPoints:
    """Empirical CCDF of one tail of a standardized return series.

    Positive side uses values > 0 as-is; negative side uses magnitudes of
    values < 0. Zero returns (e.g. from forward-filled gaps) belong to
    neither side. Duplicate magnitudes collapse to a single point.
    """
    if not r.standardized:
        raise ValueError("returns must be standardized")
    mags = _side_magnitudes(r, side)
    n = mags.size
    if n < min_count:
        raise ValueError(f"{side} side has {n} observations, need at least {min_count}")
    mags = np.sort(mags)
    x, first = np.unique(mags, return_index=True)
    p = (n - first) / n
    return CcdfPoints(side=side, x=x, p=p, n_side=int(n))


def log_binned(c: CcdfPoints, n_bins: int = 50) -> CcdfPoints:
    """Collapse CCDF points into log-spaced bins (geometric means per bin).

    Optional coarsening for fits on very dense tails; exact power laws are
    preserved because both coordinates are averaged in log space.
    """
    if n_bins < 3:
        raise ValueError("need at least 3 bins")
    if c.x[0] == c.x[-1]:
        raise ValueError("cannot bin a single magnitude")
    edges = np.geomspace(c.x[0], c.x[-1], n_bins + 1)
    which = np.clip(np.searchsorted(edges, c.x, side="right") - 1, 0, n_bins - 1)
    xs: list = []
    ps: list = []
    for b in range(n_bins):
        sel = which == b
        if not sel.any():
            continue
        xs.append(np.exp(np.mean(np.log(c.x[sel]))))
        ps.append(np.exp(np.mean(np.log(c.p[sel]))))
    return CcdfPoints(side=c.side, x=np.asarray(xs), p=np.asarray(ps), n_side=c.n_side)


def fit_tail(c: CcdfPoints, region: tuple) -> TailFit:
    """Least-squares line through log p vs log x over `region` = [lo, hi].

    Each distinct magnitude contributes one equally weighted point. The tail
    exponent is minus the slope; the prefactor is exp(intercept).
    """
    lo, hi = float(region[0]), float(region[1])
    if lo <= 0 or hi <= lo:
        raise ValueError("fitting region must satisfy 0 < lo < hi")
    sel = (c.x >= lo) & (c.x <= hi)
    n_pts = int(sel.sum())
    if n_pts < 3:
        raise ValueError("fewer than 3 points in fitting region")
    fit = fit_line(np.log(c.x[sel]), np.log(c.p[sel]))
    mu = -fit.slope
    if mu <= 0:
        raise ValueError("no power-law decay in region")
    return TailFit(
        side=c.side,
        region=(lo, hi),
        mu=float(mu),
        kappa=float(math.exp(fit.intercept)),
        stderr_mu=fit.stderr_slope,
        r_squared=fit.r_squared,
        n_points=n_pts,
    )


def hill_estimator(r: ReturnSeries, side: str, k: int) -> tuple:
    """Hill tail-index estimate from the top k order statistics of one tail.

    Returns (mu, stderr) with stderr = mu / sqrt(k). Independent of the
    CCDF regression, so the two can be compared for consistency.
    """
    if k < 10:
        raise ValueError("k must be at least 10")
    mags = _side_magnitudes(r, side)
    if mags.size <= k:
        raise ValueError(f"{side} side has {mags.size} observations, need more than k={k}")
    s = np.sort(mags)
    threshold = s[-(k + 1)]
    denom = float(np.sum(np.log(s[-k:] / threshold)))
    if denom <= 0.0:
        raise ValueError("tied order statistics in tail")
    mu = k / denom
    return float(mu), float(mu / math.sqrt(k))


def write_ccdf(c: CcdfPoints, path) -> None:
    """Serialize CCDF points as CSV with header `x,p` (log-log plottable)."""
    with open(path, "w", newline="") as fh:
        fh.write("x,p\n")
        for x, p in zip(c.x, c.p):
            fh.write(f"{fmt_float(x)},{fmt_float(p)}\n")


def write_fit_overlay(fit: TailFit, path, n_points: int = 50) -> None:
    """Sample the fitted power law at log-spaced x over the fit region."""
    xs = np.geomspace(fit.region[0], fit.region[1], n_points)
    with open(path, "w", newline="") as fh:
        fh.write("x,p\n")
        for x in xs:
            fh.write(f"{fmt_float(x)},{fmt_float(fit.kappa * x ** (-fit.mu))}\n")

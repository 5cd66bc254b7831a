"""Ordinary least-squares line fit used by the log-log estimators."""

from typing import NamedTuple

import numpy as np


class LineFit(NamedTuple):
    slope: float
    intercept: float
    stderr_slope: float
    r_squared: float
    n: int


def fit_line(x: np.ndarray, y: np.ndarray) -> LineFit:
    """Fit y = a + b*x by least squares and return the slope diagnostics.

    The slope standard error uses the usual residual-variance estimate with
    n - 2 degrees of freedom (zero when the fit is exact with n > 2 points).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < 3:
        raise ValueError("need at least 3 points for a line fit")
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    dy = y - ym
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("zero x-variance")
    slope = float(dx @ dy) / sxx
    intercept = ym - slope * xm
    resid = dy - slope * dx
    ssr = float(resid @ resid)
    sst = float(dy @ dy)
    mse = ssr / (n - 2)
    stderr = float(np.sqrt(mse / sxx))
    r_squared = 1.0 - ssr / sst if sst > 0.0 else 1.0
    return LineFit(slope, float(intercept), stderr, float(r_squared), int(n))

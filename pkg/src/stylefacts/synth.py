"""Seeded synthetic return generators with known tail and memory behavior.

All randomness comes from numpy's Generator seeded with the PCG64 bit
generator, so a fixed (model, parameters, seed) triple reproduces bitwise
identical output on the same numpy version. Cross-implementation checks
should rely on the distributions, not on exact draws.

Models:
  gaussian                i.i.d. standard normal
  student_t(nu)           i.i.d. Student-t scaled to unit variance (nu > 2)
  pareto(mu)              i.i.d. unit-Pareto magnitudes with random sign,
                          P(|X| > x) = x**(-mu) for x >= 1
  garch(omega,alpha,beta) var_t = omega + alpha*r_{t-1}^2 + beta*var_{t-1},
                          r_t = sqrt(var_t)*eps_t, stationary start plus a
                          discarded burn-in
  sv(log_vol_mean,phi,vol_of_vol)
                          log sigma_t is a stationary AR(1), r_t = sigma_t*eps_t
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .ingest import BarSeries, TickRecord

GARCH_BURN_IN = 10_000

MODEL_PARAMS = {
    "gaussian": (),
    "student_t": ("nu",),
    "pareto": ("mu",),
    "garch": ("omega", "alpha", "beta"),
    "sv": ("log_vol_mean", "phi", "vol_of_vol"),
}


@dataclass
class SyntheticSpec:
    """Model name, sample size, seed, and model parameters."""

    model: str
    n: int
    seed: int
    params: dict = field(default_factory=dict)


def gaussian_returns(n: int, seed: int) -> np.ndarray:
    _check_n(n)
    return np.random.default_rng(seed).standard_normal(n)


def student_t_returns(nu: float, n: int, seed: int) -> np.ndarray:
    _check_n(n)
    if nu <= 2:
        raise ValueError("nu must exceed 2 so the variance is finite")
    draws = np.random.default_rng(seed).standard_t(nu, n)
    return draws / math.sqrt(nu / (nu - 2.0))


def pareto_returns(mu: float, n: int, seed: int) -> np.ndarray:
    _check_n(n)
    if mu <= 0:
        raise ValueError("mu must be positive")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    magnitudes = (1.0 - u) ** (-1.0 / mu)
    signs = rng.integers(0, 2, n) * 2 - 1
    return magnitudes * signs


def garch_returns(
    omega: float, alpha: float, beta: float, n: int, seed: int, burn_in: int = GARCH_BURN_IN
) -> np.ndarray:
    _check_n(n)
    if omega <= 0:
        raise ValueError("omega must be positive")
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be non-negative")
    if alpha + beta >= 1:
        raise ValueError("alpha + beta must be below 1 for stationarity")
    rng = np.random.default_rng(seed)
    total = n + burn_in
    eps = rng.standard_normal(total)
    r = np.empty(total)
    var = omega / (1.0 - alpha - beta)
    for t in range(total):
        r[t] = math.sqrt(var) * eps[t]
        var = omega + alpha * r[t] * r[t] + beta * var
    return r[burn_in:]


def sv_returns(log_vol_mean: float, phi: float, vol_of_vol: float, n: int, seed: int):
    """Lognormal stochastic-volatility returns; also returns the true volatility path.

    log sigma_t follows a stationary AR(1) around `log_vol_mean` with
    innovation scale `vol_of_vol`; the initial state is drawn from the
    stationary distribution so no burn-in is needed.
    """
    _check_n(n)
    if abs(phi) >= 1:
        raise ValueError("phi magnitude must be below 1")
    if vol_of_vol < 0:
        raise ValueError("vol_of_vol must be non-negative")
    rng = np.random.default_rng(seed)
    z0 = rng.standard_normal()
    eta = rng.standard_normal(n) * vol_of_vol
    eps = rng.standard_normal(n)
    log_sig = np.empty(n)
    stationary_sd = vol_of_vol / math.sqrt(1.0 - phi * phi)
    log_sig[0] = log_vol_mean + stationary_sd * z0
    for t in range(1, n):
        log_sig[t] = log_vol_mean + phi * (log_sig[t - 1] - log_vol_mean) + eta[t]
    sigma = np.exp(log_sig)
    return sigma * eps, sigma


def generate(spec: SyntheticSpec) -> np.ndarray:
    """Generate the return sequence described by `spec` (deterministic per seed)."""
    if spec.model not in MODEL_PARAMS:
        raise ValueError(f"unknown model {spec.model!r}; expected one of {sorted(MODEL_PARAMS)}")
    missing = [k for k in MODEL_PARAMS[spec.model] if k not in spec.params]
    if missing:
        raise ValueError(f"model {spec.model!r} missing parameters {missing}")
    p = spec.params
    if spec.model == "gaussian":
        return gaussian_returns(spec.n, spec.seed)
    if spec.model == "student_t":
        return student_t_returns(p["nu"], spec.n, spec.seed)
    if spec.model == "pareto":
        return pareto_returns(p["mu"], spec.n, spec.seed)
    if spec.model == "garch":
        return garch_returns(p["omega"], p["alpha"], p["beta"], spec.n, spec.seed)
    return sv_returns(p["log_vol_mean"], p["phi"], p["vol_of_vol"], spec.n, spec.seed)[0]


def price_bars(
    returns: np.ndarray, interval: int = 60, start: int = 0, p0: float = 100.0
) -> BarSeries:
    """Price path p0 * exp(cumulative returns) as a BarSeries (no filled bars)."""
    if p0 <= 0:
        raise ValueError("p0 must be positive")
    log_path = np.concatenate(([0.0], np.cumsum(np.asarray(returns, dtype=float))))
    log_path += math.log(p0)
    if np.max(np.abs(log_path)) > 700.0:
        raise ValueError("price path exceeds float range; reduce the return scale")
    prices = np.exp(log_path)
    return BarSeries(
        start=start,
        interval=interval,
        prices=prices,
        fill_flags=np.zeros(prices.size, dtype=bool),
    )


def bars_to_ticks(bars: BarSeries, volume: float = 1.0) -> list:
    """One synthetic trade per bar, at the bar's start time and close price."""
    return [
        TickRecord(int(t), float(p), volume)
        for t, p in zip(bars.timestamps(), bars.prices)
    ]


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")

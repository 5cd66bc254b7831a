"""Scaling analysis of high-frequency price returns.

Tick ingestion, bar resampling, standardized log returns, power-law tail
fits of the return distribution, long-memory autocorrelation with jackknife
errors, and realized-volatility standardization, all verified against
seeded synthetic generators with known properties.
"""

from .ingest import BarSeries, ParseResult, TickFormat, TickRecord, build_bars, parse_ticks, slice_bars
from .memory import AcfEstimate, AcfPowerLawFit, acf, fit_acf_powerlaw, jackknife_sigma
from .returns import ReturnSeries, log_returns, period_bounds, standardize
from .rv import (
    RvSeries,
    StandardizedReturns,
    WhitenessReport,
    normality_stats,
    realized_volatility,
    standardize_by_rv,
    whiteness_check,
)
from .scaling import CcdfPoints, TailFit, ccdf, fit_tail, hill_estimator
from .synth import SyntheticSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AcfEstimate",
    "AcfPowerLawFit",
    "BarSeries",
    "CcdfPoints",
    "ParseResult",
    "ReturnSeries",
    "RvSeries",
    "StandardizedReturns",
    "SyntheticSpec",
    "TailFit",
    "TickFormat",
    "TickRecord",
    "WhitenessReport",
    "acf",
    "build_bars",
    "ccdf",
    "fit_acf_powerlaw",
    "fit_tail",
    "generate",
    "hill_estimator",
    "jackknife_sigma",
    "log_returns",
    "normality_stats",
    "parse_ticks",
    "period_bounds",
    "realized_volatility",
    "slice_bars",
    "standardize",
    "standardize_by_rv",
    "whiteness_check",
    "__version__",
]

"""Optional data-dependent checks against the public Bitstamp USD tick file.

Not part of CI: runs only when BITSTAMP_TICKS points at the downloaded
`unixtime,price,volume` CSV. Tolerances are wide to absorb data-vintage
and convention differences.
"""

import os

import numpy as np
import pytest

from stylefacts.ingest import build_bars, parse_ticks
from stylefacts.memory import acf, fit_acf_powerlaw
from stylefacts.returns import log_returns, period_bounds, standardize
from stylefacts.scaling import ccdf, fit_tail

TICKS_PATH = os.environ.get("BITSTAMP_TICKS")

pytestmark = pytest.mark.skipif(
    not TICKS_PATH, reason="set BITSTAMP_TICKS to the downloaded Bitstamp tick CSV"
)


@pytest.fixture(scope="module")
def records():
    return parse_ticks(TICKS_PATH).records


def standardized_returns(records, period):
    bars = build_bars(records, 60, t_range=period_bounds(period))
    return standardize(log_returns(bars))


def test_dataset_period_tail_indices(records):
    std_1 = standardized_returns(records, "I")
    mu_1 = fit_tail(ccdf(std_1, "positive"), (2, 20)).mu
    assert 1.8 <= mu_1 <= 2.4

    std_2 = standardized_returns(records, "II")
    mu_2 = fit_tail(ccdf(std_2, "positive"), (2, 20)).mu
    assert 2.9 <= mu_2 <= 3.7


def test_dataset_2_memory_exponents(records):
    std = standardized_returns(records, "II")
    est = acf(np.abs(std.values), 10_000)
    short = fit_acf_powerlaw(est, (3, 500)).exponent
    long = fit_acf_powerlaw(est, (1500, 10_000)).exponent
    assert -0.15 <= short <= -0.09
    assert -0.28 <= long <= -0.17

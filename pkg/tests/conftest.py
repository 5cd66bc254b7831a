import numpy as np
import pytest

from stylefacts.returns import ReturnSeries


@pytest.fixture
def as_returns():
    """Wrap raw values as an unstandardized ReturnSeries."""

    def make(values, interval=60):
        return ReturnSeries(np.asarray(values, dtype=float), interval)

    return make


@pytest.fixture
def as_standardized():
    """Wrap values as a ReturnSeries with the standardized flag set.

    Used for small schematic inputs where the exact magnitudes matter and
    re-standardizing would change them; the flag is trusted downstream.
    """

    def make(values, interval=60):
        return ReturnSeries(np.asarray(values, dtype=float), interval, standardized=True)

    return make

import datetime as dt

import numpy as np
import pytest

from volsent.sentiment import SentimentSeries
from volsent.synthgen import trading_dates


@pytest.fixture
def rng():
    return np.random.default_rng(20240331)


def make_series(values, label="test", start=dt.date(2020, 1, 2)):
    values = np.asarray(values, dtype=float)
    return SentimentSeries(tuple(trading_dates(len(values), start)), values, label=label)


@pytest.fixture
def series_factory():
    return make_series

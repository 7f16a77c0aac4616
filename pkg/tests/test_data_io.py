import datetime as dt

import numpy as np
import pytest

from volsent.data_io import (
    AlignedPanel,
    OptionQuote,
    TradingCalendar,
    align_calendar,
    filter_quotes,
    load_option_quotes,
    load_proxies,
    load_rates,
    read_panel,
    write_panel,
)
from volsent.errors import EmptyIntersection, MissingColumn

QUOTES_HEADER = "trade_date,expiry_date,strike,kind,price,underlying_price\n"


def write_quotes(path, rows):
    path.write_text(QUOTES_HEADER + "".join(rows), encoding="utf-8")


def test_load_well_formed_rows(tmp_path):
    f = tmp_path / "quotes.csv"
    write_quotes(
        f,
        [
            "2020-01-02,2020-02-26,2.75,call,0.12,2.80\n",
            "2020-01-02,2020-02-26,2.85,put,0.10,2.80\n",
            "2020-01-03,2020-03-25,2.90,call,0.08,2.82\n",
        ],
    )
    quotes, rejects = load_option_quotes(f)
    assert len(quotes) == 3
    assert rejects == []
    assert quotes[0].kind == "call"
    assert quotes[1].strike == 2.85


def test_load_rejects_inverted_expiry_with_line_number(tmp_path):
    f = tmp_path / "quotes.csv"
    write_quotes(
        f,
        [
            "2020-01-02,2020-02-26,2.75,call,0.12,2.80\n",
            "2020-03-02,2020-02-26,2.75,call,0.12,2.80\n",
        ],
    )
    quotes, rejects = load_option_quotes(f)
    assert len(quotes) == 1
    assert len(rejects) == 1
    assert rejects[0].line == 3
    assert "expiry" in rejects[0].reason


def test_load_rejects_unparsable_value(tmp_path):
    f = tmp_path / "quotes.csv"
    write_quotes(f, ["2020-01-02,2020-02-26,not-a-number,call,0.12,2.80\n"])
    quotes, rejects = load_option_quotes(f)
    assert quotes == []
    assert rejects[0].line == 2


def test_shuffled_columns_match_canonical_order(tmp_path):
    canonical = tmp_path / "canonical.csv"
    write_quotes(canonical, ["2020-01-02,2020-02-26,2.75,call,0.12,2.80\n"])
    shuffled = tmp_path / "shuffled.csv"
    shuffled.write_text(
        "price,kind,trade_date,underlying_price,strike,expiry_date\n"
        "0.12,call,2020-01-02,2.80,2.75,2020-02-26\n",
        encoding="utf-8",
    )
    a, _ = load_option_quotes(canonical)
    b, _ = load_option_quotes(shuffled)
    assert a == b


def test_missing_column_is_fatal(tmp_path):
    f = tmp_path / "quotes.csv"
    f.write_text("trade_date,expiry_date,strike,kind,price\n", encoding="utf-8")
    with pytest.raises(MissingColumn):
        load_option_quotes(f)


def test_load_rates_sanity_bounds(tmp_path):
    f = tmp_path / "rates.csv"
    f.write_text("date,rate\n2020-01-02,0.03\n2020-01-03,0.9\n", encoding="utf-8")
    rates, rejects = load_rates(f)
    assert len(rates) == 1
    assert rates[0].rate == 0.03
    assert rejects[0].line == 3


def test_load_proxies_roundtrip(tmp_path):
    f = tmp_path / "proxies.csv"
    f.write_text(
        "date,n_up,n_down,volume,float_cap,cef_nav,cef_price\n"
        "2020-01-02,300,200,5e9,1e11,1.0,0.9\n"
        "2020-01-03,250,260,4e9,1e11,1.0,0.95\n",
        encoding="utf-8",
    )
    panel = load_proxies(f)
    assert panel.dates == (dt.date(2020, 1, 2), dt.date(2020, 1, 3))
    assert panel.n_up[0] == 300
    assert panel.cef_price[1] == 0.95


class TestFilterQuotes:
    def quote(self, trade, expiry):
        return OptionQuote(trade, expiry, 2.75, "call", 0.1, 2.8)

    def test_four_trading_days_excluded_at_threshold_five(self):
        # Mon 2020-01-06 -> Fri 2020-01-10 spans 4 trading days
        q = self.quote(dt.date(2020, 1, 6), dt.date(2020, 1, 10))
        assert filter_quotes([q], min_days_to_expiry=5) == []

    def test_ten_trading_days_retained(self):
        q = self.quote(dt.date(2020, 1, 6), dt.date(2020, 1, 20))
        assert filter_quotes([q], min_days_to_expiry=5) == [q]

    def test_empty_input(self):
        assert filter_quotes([], min_days_to_expiry=5) == []

    def test_idempotent(self):
        quotes = [
            self.quote(dt.date(2020, 1, 6), dt.date(2020, 1, 10)),
            self.quote(dt.date(2020, 1, 6), dt.date(2020, 3, 25)),
            self.quote(dt.date(2020, 1, 6), dt.date(2020, 1, 14)),
        ]
        once = filter_quotes(quotes)
        assert filter_quotes(once) == once

    def test_holiday_calendar_shrinks_day_count(self):
        cal = TradingCalendar(holidays=[dt.date(2020, 1, 7)])
        q = self.quote(dt.date(2020, 1, 6), dt.date(2020, 1, 10))
        assert cal.days_between(q.trade_date, q.expiry_date) == 3
        assert filter_quotes([q], min_days_to_expiry=4, calendar=cal) == []


class TestAlignCalendar:
    def test_identical_dates_identity(self):
        days = (dt.date(2020, 1, 2), dt.date(2020, 1, 3))
        panel = align_calendar({"a": (days, [1.0, 2.0]), "b": (days, [3.0, 4.0])})
        assert panel.dates == days
        assert panel.dropped == {}
        np.testing.assert_array_equal(panel.columns["a"], [1.0, 2.0])

    def test_missing_date_dropped_and_reported(self):
        d1, d2, d3 = dt.date(2020, 1, 2), dt.date(2020, 1, 3), dt.date(2020, 1, 6)
        panel = align_calendar({"a": ((d1, d3), [1.0, 3.0]), "b": ((d1, d2, d3), [1.0, 2.0, 3.0])})
        assert panel.dates == (d1, d3)
        assert panel.dropped == {"b": (d2,)}

    def test_disjoint_dates_raise(self):
        with pytest.raises(EmptyIntersection):
            align_calendar(
                {
                    "a": ((dt.date(2020, 1, 2),), [1.0]),
                    "b": ((dt.date(2020, 1, 3),), [2.0]),
                }
            )

    def test_output_dates_subset_of_inputs_and_increasing(self, rng):
        base = [dt.date(2020, 1, 2) + dt.timedelta(days=i) for i in range(40)]
        sets = {}
        for name in "abc":
            keep = sorted(rng.choice(40, size=30, replace=False))
            days = tuple(base[i] for i in keep)
            sets[name] = (days, rng.normal(size=30))
        panel = align_calendar(sets)
        for days, _ in sets.values():
            assert set(panel.dates) <= set(days)
        assert all(b > a for a, b in zip(panel.dates, panel.dates[1:]))


def test_panel_write_read_roundtrip(tmp_path, rng):
    days = tuple(dt.date(2020, 1, 2) + dt.timedelta(days=i) for i in range(5))
    panel = AlignedPanel(dates=days, columns={"x": rng.normal(size=5), "y": rng.normal(size=5)})
    path = tmp_path / "panel.csv"
    write_panel(path, panel, metadata={"tool": "test"})
    back = read_panel(path)
    assert back.dates == panel.dates
    for name in panel.columns:
        np.testing.assert_array_equal(back.columns[name], panel.columns[name])

import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volsent.data_io import AlignedPanel
from volsent.errors import (
    ConstantColumn,
    CountOverflow,
    DuplicateDate,
    EmptyDocument,
    NonPositiveFloatCap,
    NonPositiveNav,
    SchemaMismatch,
    TooFewDates,
)
from volsent.sentiment import (
    SentimentSeries,
    adl,
    cef_discount,
    composite_index,
    dictionary_score,
    load_external_scores,
    turnover,
    write_scores,
)
from volsent.synthgen import trading_dates


def panel_from(columns):
    n = len(next(iter(columns.values())))
    return AlignedPanel(dates=tuple(trading_dates(n)), columns={k: np.asarray(v, float) for k, v in columns.items()})


class TestProxies:
    def test_adl_direct(self):
        assert adl(300, 200) == 100

    def test_adl_empty_market(self):
        assert adl(0, 0) == 0

    def test_adl_antisymmetric(self):
        assert adl(450, 120) == 330
        assert adl(120, 450) == -330

    def test_turnover_direct(self):
        assert turnover(5e9, 1e11) == pytest.approx(0.05)

    def test_turnover_no_trading(self):
        assert turnover(0.0, 1e11) == 0.0

    def test_turnover_zero_cap(self):
        with pytest.raises(NonPositiveFloatCap):
            turnover(1e9, 0.0)

    def test_cef_discount_ten_percent(self):
        assert cef_discount(1.00, 0.90) == pytest.approx(0.10)

    def test_cef_discount_par(self):
        assert cef_discount(1.00, 1.00) == 0.0

    def test_cef_premium_is_negative(self):
        assert cef_discount(1.00, 1.05) == pytest.approx(-0.05)

    def test_cef_nonpositive_nav(self):
        with pytest.raises(NonPositiveNav):
            cef_discount(0.0, 1.0)


class TestCompositeIndex:
    def test_two_perfectly_correlated_proxies(self, rng):
        base = rng.normal(size=60)
        panel = panel_from({"adl": base, "turnover": 3.0 * base + 7.0})
        series, loadings = composite_index(panel)
        assert loadings.explained_variance == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(loadings.loadings, [1 / np.sqrt(2)] * 2, atol=1e-12)

    def test_single_proxy_equals_standardized_values(self, rng):
        base = rng.normal(size=60)
        panel = panel_from({"adl": base})
        series, loadings = composite_index(panel)
        np.testing.assert_allclose(series.values, (base - base.mean()) / base.std(), atol=1e-12)
        assert loadings.explained_variance == 1.0

    def test_factor_model_recovery(self, rng):
        factor = rng.normal(size=300)
        noise = 0.05
        panel = panel_from(
            {
                "adl": 2.0 * factor + noise * rng.normal(size=300),
                "turnover": 1.5 * factor + noise * rng.normal(size=300),
                "cef_discount": -1.0 * factor + noise * rng.normal(size=300),
            }
        )
        series, loadings = composite_index(panel)
        corr = np.corrcoef(series.values, factor)[0, 1]
        assert corr > 0.99
        assert loadings.explained_variance > 0.9

    def test_output_standardized(self, rng):
        panel = panel_from({"adl": rng.normal(size=100), "turnover": rng.normal(size=100)})
        series, _ = composite_index(panel)
        assert series.values.mean() == pytest.approx(0.0, abs=1e-10)
        assert series.values.std() == pytest.approx(1.0, abs=1e-10)

    def test_invariant_under_positive_affine_rescaling(self, rng):
        cols = {"adl": rng.normal(size=80), "turnover": rng.normal(size=80), "cef_discount": rng.normal(size=80)}
        series_a, _ = composite_index(panel_from(cols))
        rescaled = {k: 3.5 * v + 11.0 for k, v in cols.items()}
        series_b, _ = composite_index(panel_from(rescaled))
        np.testing.assert_allclose(series_a.values, series_b.values, atol=1e-10)

    def test_sign_convention_vs_adl(self, rng):
        for seed in range(5):
            local = np.random.default_rng(seed)
            panel = panel_from(
                {"adl": local.normal(size=60), "turnover": local.normal(size=60), "cef_discount": local.normal(size=60)}
            )
            series, _ = composite_index(panel)
            z = (panel.columns["adl"] - panel.columns["adl"].mean()) / panel.columns["adl"].std()
            assert np.corrcoef(series.values, z)[0, 1] >= 0

    def test_constant_column_rejected(self, rng):
        panel = panel_from({"adl": rng.normal(size=60), "turnover": np.full(60, 2.0)})
        with pytest.raises(ConstantColumn):
            composite_index(panel)

    def test_too_few_dates(self, rng):
        panel = panel_from({"adl": rng.normal(size=10), "turnover": rng.normal(size=10)})
        with pytest.raises(TooFewDates):
            composite_index(panel)


class TestDictionaryScore:
    def test_direct(self):
        assert dictionary_score(2, 1, 10) == pytest.approx(0.1)

    def test_neutral(self):
        assert dictionary_score(0, 0, 50) == 0.0

    def test_upper_bound_attained(self):
        assert dictionary_score(10, 0, 10) == 1.0

    def test_empty_document(self):
        with pytest.raises(EmptyDocument):
            dictionary_score(0, 0, 0)

    def test_count_overflow(self):
        with pytest.raises(CountOverflow):
            dictionary_score(6, 5, 10)

    @given(
        n_total=st.integers(1, 500),
        n_pos=st.integers(0, 500),
        n_neg=st.integers(0, 500),
    )
    @settings(max_examples=200, deadline=None)
    def test_bounds_and_antisymmetry(self, n_total, n_pos, n_neg):
        if n_pos + n_neg > n_total:
            with pytest.raises(CountOverflow):
                dictionary_score(n_pos, n_neg, n_total)
            return
        score = dictionary_score(n_pos, n_neg, n_total)
        assert -1.0 <= score <= 1.0
        assert dictionary_score(n_neg, n_pos, n_total) == pytest.approx(-score)


class TestExternalScores:
    def test_valid_file_roundtrip(self, tmp_path, rng):
        days = tuple(trading_dates(100))
        series = SentimentSeries(days, rng.normal(size=100), label="external:bbl")
        path = tmp_path / "sentiment.csv"
        write_scores(path, series)
        back = load_external_scores(path)
        assert len(back) == 100
        assert back.dates == days
        np.testing.assert_array_equal(back.values, series.values)  # bitwise
        assert back.label == "external:bbl"

    def test_duplicate_date_rejected(self, tmp_path):
        path = tmp_path / "sentiment.csv"
        path.write_text(
            "date,score,n_texts\n2020-01-02,0.5,3\n2020-01-02,0.4,2\n", encoding="utf-8"
        )
        with pytest.raises(DuplicateDate):
            load_external_scores(path)

    def test_schema_mismatch(self, tmp_path):
        path = tmp_path / "sentiment.csv"
        path.write_text("date,value\n2020-01-02,0.5\n", encoding="utf-8")
        with pytest.raises(SchemaMismatch):
            load_external_scores(path)

    def test_empty_score_days_skipped(self, tmp_path):
        path = tmp_path / "sentiment.csv"
        path.write_text(
            "date,score,n_texts\n2020-01-02,0.5,3\n2020-01-03,,0\n2020-01-06,0.25,1\n",
            encoding="utf-8",
        )
        series = load_external_scores(path)
        assert len(series) == 2
        assert series.dates == (dt.date(2020, 1, 2), dt.date(2020, 1, 6))

    def test_default_label_is_file_stem(self, tmp_path):
        path = tmp_path / "bbl_scores.csv"
        path.write_text("date,score,n_texts\n2020-01-02,0.5,3\n", encoding="utf-8")
        assert load_external_scores(path).label == "external:bbl_scores"

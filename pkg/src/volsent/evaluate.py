"""Rolling out-of-sample forecasting and accuracy comparison.

Forecasts are one-day-ahead refits on a trailing window; accuracy is scored
as MAPE (headline, matches the percent magnitudes reported in this domain)
and MSPE, bucketed by grid maturity with a Total row across all surface
variables. Comparisons are paired: every method is scored on the identical
forecast dates.
"""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DateMismatch, Empty, InsufficientSample, WindowTooShort, ZeroRealized
from .sentiment import SentimentSeries
from .varfit import (
    CoefficientReport,
    StatePanel,
    coefficient_report,
    fit_var,
    forecast,
    select_lag,
    significance_stars,
)

BUCKETS = ("1M", "3M", "6M", "12M")
_MATURITY_RE = re.compile(r"_(\d+)m(_|$)")


@dataclass(frozen=True)
class ForecastRecord:
    date: dt.date
    variable: str
    predicted: float
    realized: float


@dataclass
class ModelSpec:
    """Estimation settings shared by the rolling and robustness loops."""

    p: int | str = 1  # lag order or "auto"
    p_max: int = 8
    use_sentiment: bool = True
    expanding: bool = False


@dataclass
class AccuracyReport:
    method: str
    buckets: dict[str, tuple[float, float]]  # bucket -> (mape, mspe)
    n_days: int

    def to_rows(self) -> list[list]:
        rows = []
        for bucket, (mape_v, mspe_v) in self.buckets.items():
            rows.append([self.method, bucket, float(mape_v), float(mspe_v), self.n_days])
        return rows


def mape(records: Sequence[ForecastRecord]) -> float:
    if not records:
        raise Empty("no forecast records")
    realized = np.array([r.realized for r in records])
    predicted = np.array([r.predicted for r in records])
    if np.any(realized == 0):
        raise ZeroRealized("realized value of zero makes MAPE undefined")
    return float(np.mean(np.abs(predicted - realized) / np.abs(realized)))


def mspe(records: Sequence[ForecastRecord]) -> float:
    if not records:
        raise Empty("no forecast records")
    realized = np.array([r.realized for r in records])
    predicted = np.array([r.predicted for r in records])
    return float(np.mean((predicted - realized) ** 2))


def variable_bucket(name: str) -> str | None:
    """Maturity bucket of a state variable, or None for sentiment columns."""
    match = _MATURITY_RE.search(name)
    if match is None:
        return None
    return f"{match.group(1)}M"


def _strip_sentiment(panel: StatePanel) -> StatePanel:
    keep = [n for n in panel.var_names if n not in ("hfs", "lfs")]
    return panel.subset(keep)


def _with_sentiment(panel: StatePanel, hfs: SentimentSeries, lfs: SentimentSeries) -> StatePanel:
    if hfs.dates != panel.dates or lfs.dates != panel.dates:
        raise DateMismatch("sentiment variant dates do not match the panel")
    return StatePanel(
        dates=panel.dates,
        var_names=panel.var_names + ("hfs", "lfs"),
        values=np.column_stack([panel.values, hfs.values, lfs.values]),
    )


def rolling_forecast(
    panel: StatePanel,
    spec: ModelSpec | None = None,
    initial_window: int = 500,
    step: int = 1,
    min_window: int = 250,
    exog: StatePanel | None = None,
) -> list[ForecastRecord]:
    """One-day-ahead forecasts from per-date refits on a trailing window."""
    spec = spec or ModelSpec()
    T = panel.values.shape[0]
    if initial_window < min_window:
        raise WindowTooShort(f"initial window {initial_window} below minimum {min_window}")
    if T <= initial_window:
        raise WindowTooShort(f"panel length {T} leaves no dates to forecast")

    records: list[ForecastRecord] = []
    for t in range(initial_window, T, step):
        start = 0 if spec.expanding else t - initial_window
        train = panel.window(start, t)
        train_exog = exog.window(start, t) if exog is not None else None
        if spec.p == "auto":
            p, _ = select_lag(train, p_max=spec.p_max, exog=train_exog)
        else:
            p = int(spec.p)
        model = fit_var(train, p, exog=train_exog)
        exog_future = exog.values[t:t + 1] if exog is not None else None
        # constant columns may have been dropped during the fit
        cols = [panel.var_names.index(n) for n in model.var_names]
        pred = forecast(model, train.values[-p:][:, cols], horizon=1, exog_future=exog_future)[0]
        name_to_pred = dict(zip(model.var_names, pred))
        for j, name in enumerate(panel.var_names):
            if name in name_to_pred:
                records.append(
                    ForecastRecord(panel.dates[t], name, float(name_to_pred[name]), float(panel.values[t, j]))
                )
    return records


def random_walk_forecast(panel: StatePanel, initial_window: int) -> list[ForecastRecord]:
    """Baseline: tomorrow's state equals today's."""
    records = []
    for t in range(initial_window, panel.values.shape[0]):
        for j, name in enumerate(panel.var_names):
            records.append(
                ForecastRecord(panel.dates[t], name, float(panel.values[t - 1, j]), float(panel.values[t, j]))
            )
    return records


def accuracy_report(method: str, records: Sequence[ForecastRecord]) -> AccuracyReport:
    """Bucketed MAPE/MSPE over the surface variables only."""
    surface = [r for r in records if variable_bucket(r.variable) is not None]
    if not surface:
        raise Empty("no surface-variable records to score")
    buckets: dict[str, tuple[float, float]] = {}
    for bucket in BUCKETS:
        rs = [r for r in surface if variable_bucket(r.variable) == bucket]
        if rs:
            buckets[bucket] = (mape(rs), mspe(rs))
    buckets["Total"] = (mape(surface), mspe(surface))
    n_days = len({r.date for r in surface})
    return AccuracyReport(method=method, buckets=buckets, n_days=n_days)


def compare_methods(
    panel: StatePanel,
    sentiment_variants: Mapping[str, tuple[SentimentSeries, SentimentSeries]],
    baselines: Sequence[str] = ("none", "random_walk"),
    spec: ModelSpec | None = None,
    initial_window: int = 500,
    min_window: int = 250,
    exog: StatePanel | None = None,
) -> list[AccuracyReport]:
    """Paired accuracy comparison across sentiment variants and baselines.

    `panel` holds the surface state without sentiment columns; each variant
    contributes its own HFS/LFS pair. All methods are evaluated on the same
    forecast dates, asserted via the paired-date check.
    """
    spec = spec or ModelSpec()
    base = _strip_sentiment(panel)
    runs: dict[str, list[ForecastRecord]] = {}
    if "none" in baselines:
        runs["none"] = rolling_forecast(base, spec, initial_window, min_window=min_window, exog=exog)
    if "random_walk" in baselines:
        runs["random_walk"] = random_walk_forecast(base, initial_window)
    for label, (hfs, lfs) in sentiment_variants.items():
        augmented = _with_sentiment(base, hfs, lfs)
        runs[label] = rolling_forecast(augmented, spec, initial_window, min_window=min_window, exog=exog)

    date_sets = {label: {r.date for r in records} for label, records in runs.items()}
    reference = next(iter(date_sets.values()))
    for label, dates in date_sets.items():
        if dates != reference:
            raise DateMismatch(f"method {label!r} covers different forecast dates")

    return [accuracy_report(label, records) for label, records in runs.items()]


@dataclass
class CoefficientDelta:
    window: str
    regressor: str
    equation: str
    coef: float
    se: float
    stars: str
    sign_flip: bool  # flipped sign vs the first window while significant in both
    significance_change: bool  # crossed the 5% line vs the first window


def subperiod_robustness(
    panel: StatePanel,
    windows: Sequence[tuple[dt.date, dt.date]],
    spec: ModelSpec | None = None,
    exog: StatePanel | None = None,
) -> list[CoefficientDelta]:
    """Refit per date window and flag coefficient instability.

    A sign flip is only flagged when the coefficient is significant (5%) in
    both the first and the current window; significance changes track
    crossings of the 5% line relative to the first window.
    """
    spec = spec or ModelSpec()
    reports: list[tuple[str, CoefficientReport]] = []
    for start, stop in windows:
        idx = [i for i, d in enumerate(panel.dates) if start <= d <= stop]
        if not idx:
            raise InsufficientSample(f"window {start}..{stop} contains no panel dates")
        sub = panel.window(idx[0], idx[-1] + 1)
        sub_exog = exog.window(idx[0], idx[-1] + 1) if exog is not None else None
        p = select_lag(sub, p_max=spec.p_max, exog=sub_exog)[0] if spec.p == "auto" else int(spec.p)
        model = fit_var(sub, p, exog=sub_exog)
        reports.append((f"{start.isoformat()}..{stop.isoformat()}", coefficient_report(model)))

    base_label, base = reports[0]
    out: list[CoefficientDelta] = []
    for label, report in reports:
        for i, reg in enumerate(report.regressors):
            for j, eq in enumerate(report.equations):
                coef, se = float(report.coefs[i, j]), float(report.ses[i, j])
                t = coef / se if se > 0 else 0.0
                sig = abs(t) > 1.959963984540054
                b_coef = float(base.coefs[i, j])
                b_se = float(base.ses[i, j])
                b_t = b_coef / b_se if b_se > 0 else 0.0
                b_sig = abs(b_t) > 1.959963984540054
                out.append(
                    CoefficientDelta(
                        window=label,
                        regressor=reg,
                        equation=eq,
                        coef=coef,
                        se=se,
                        stars=significance_stars(t),
                        sign_flip=(label != base_label) and sig and b_sig and (np.sign(coef) != np.sign(b_coef)),
                        significance_change=(label != base_label) and (sig != b_sig),
                    )
                )
    return out

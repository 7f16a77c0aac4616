"""Daily sentiment indices from market proxies, token counts, or files.

The composite index is the first principal component of the standardized
proxy columns, sign-fixed against the advance-decline column and rescaled
to unit variance. Externally produced scores enter through the
sentiment.csv contract (date, score, n_texts).
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .data_io import AlignedPanel, ProxyPanel, read_csv, write_csv
from .errors import (
    ConstantColumn,
    CountOverflow,
    DuplicateDate,
    EmptyDocument,
    NonPositiveFloatCap,
    NonPositiveNav,
    SchemaMismatch,
    TooFewDates,
)


@dataclass
class SentimentSeries:
    dates: tuple[dt.date, ...]
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.dates),):
            raise SchemaMismatch(
                f"{len(self.dates)} dates vs {self.values.shape[0]} values"
            )
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise SchemaMismatch("dates must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise SchemaMismatch("sentiment values must be finite")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass
class PcaLoadings:
    proxy_names: tuple[str, ...]
    loadings: np.ndarray  # unit norm
    explained_variance: float


def adl(n_up: float, n_down: float) -> float:
    """Advancing minus declining issue count."""
    return n_up - n_down


def turnover(volume: float, float_cap: float) -> float:
    """Traded volume over circulating capitalization."""
    if np.any(np.asarray(float_cap) <= 0):
        raise NonPositiveFloatCap(f"float_cap must be positive, got {float_cap}")
    return volume / float_cap


def cef_discount(nav: float, price: float) -> float:
    """Closed-end fund discount, positive when price sits below NAV."""
    if np.any(np.asarray(nav) <= 0):
        raise NonPositiveNav(f"nav must be positive, got {nav}")
    return (nav - price) / nav


def proxy_features(panel: ProxyPanel) -> AlignedPanel:
    """Derive the three daily proxies from the raw panel."""
    return AlignedPanel(
        dates=panel.dates,
        columns={
            "adl": adl(panel.n_up, panel.n_down),
            "turnover": turnover(panel.volume, panel.float_cap),
            "cef_discount": cef_discount(panel.cef_nav, panel.cef_price),
        },
    )


def composite_index(
    panel: AlignedPanel, min_dates: int = 30, sign_column: str = "adl"
) -> tuple[SentimentSeries, PcaLoadings]:
    """First principal component of the standardized proxy columns.

    The component sign is fixed so its correlation with the advance-decline
    column (or the first column when absent) is nonnegative, and the scores
    are re-standardized to unit variance.
    """
    names = tuple(panel.columns)
    n = len(panel.dates)
    if n < min_dates:
        raise TooFewDates(f"need >= {min_dates} dates, got {n}")
    raw = np.column_stack([panel.columns[name] for name in names])
    stds = raw.std(axis=0)
    for j, s in enumerate(stds):
        if s == 0.0:
            raise ConstantColumn(f"proxy {names[j]!r} is constant over the sample")
    z = (raw - raw.mean(axis=0)) / stds

    if len(names) == 1:
        scores = z[:, 0].copy()
        loadings = np.array([1.0])
        explained = 1.0
    else:
        corr = z.T @ z / n
        eigvals, eigvecs = np.linalg.eigh(corr)
        top = float(eigvals.max())
        # deterministic tie-break: among eigenvalues within 1e-12 of the
        # maximum, the lowest index wins
        candidates = np.nonzero(eigvals >= top - 1e-12)[0]
        idx = int(candidates.min())
        loadings = eigvecs[:, idx]
        explained = float(eigvals[idx] / eigvals.sum())
        scores = z @ loadings

    anchor = names.index(sign_column) if sign_column in names else 0
    orientation = float(np.dot(scores, z[:, anchor]))
    if orientation < 0:
        loadings = -loadings
        scores = -scores
    scale = scores.std()
    if scale == 0.0:
        raise ConstantColumn("composite index degenerated to a constant")
    scores = scores / scale
    return (
        SentimentSeries(dates=panel.dates, values=scores, label="pca"),
        PcaLoadings(proxy_names=names, loadings=loadings, explained_variance=explained),
    )


def dictionary_score(n_pos: int, n_neg: int, n_total: int) -> float:
    """Net polarity fraction (pos - neg) / total, in [-1, 1]."""
    if n_total < 1:
        raise EmptyDocument("document has no tokens")
    if n_pos + n_neg > n_total:
        raise CountOverflow(f"{n_pos}+{n_neg} polarity tokens exceed total {n_total}")
    return (n_pos - n_neg) / n_total


def load_external_scores(path: str | Path) -> SentimentSeries:
    """Load a sentiment.csv file (date, score, n_texts).

    Days flagged with an empty score (no texts) are skipped. The label is
    taken from a '# label=...' comment line or defaults to the file stem.
    """
    header, rows, metadata = read_csv(path)
    if header[:3] != ["date", "score", "n_texts"]:
        raise SchemaMismatch(f"expected columns date,score,n_texts, got {header}")
    seen: set[dt.date] = set()
    pairs = []
    for row in rows:
        day = dt.date.fromisoformat(row[0].strip())
        if day in seen:
            raise DuplicateDate(f"duplicate date {day}")
        seen.add(day)
        if row[1].strip() == "":
            continue
        pairs.append((day, float(row[1])))
    pairs.sort(key=lambda p: p[0])
    label = metadata.get("label", f"external:{Path(path).stem}")
    return SentimentSeries(
        dates=tuple(d for d, _ in pairs),
        values=np.array([v for _, v in pairs]),
        label=label,
    )


def write_scores(path: str | Path, series: SentimentSeries, n_texts: Sequence[int] | None = None) -> None:
    counts = list(n_texts) if n_texts is not None else [1] * len(series)
    rows = (
        [series.dates[i].isoformat(), float(series.values[i]), counts[i]]
        for i in range(len(series))
    )
    write_csv(path, ["date", "score", "n_texts"], rows, metadata={"label": series.label})


def write_loadings(path: str | Path, loadings: PcaLoadings, metadata: Mapping[str, str] | None = None) -> None:
    rows = (
        [name, float(loadings.loadings[j]), float(loadings.explained_variance)]
        for j, name in enumerate(loadings.proxy_names)
    )
    write_csv(path, ["proxy", "loading", "explained_variance"], rows, metadata)

"""Loading, validation, and calendar alignment of delimited input files.

All files are UTF-8, comma-delimited, with a mandatory header row. Dates are
ISO-8601, rates and moneyness are decimals (never percent). Bad rows are
collected and reported with their line numbers instead of aborting the load.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyIntersection,
    InvariantViolation,
    MissingColumn,
    SchemaMismatch,
    UnparsableValue,
)

QUOTE_COLUMNS = ("trade_date", "expiry_date", "strike", "kind", "price", "underlying_price")
RATE_COLUMNS = ("date", "rate")
PROXY_COLUMNS = ("date", "n_up", "n_down", "volume", "float_cap", "cef_nav", "cef_price")


class TradingCalendar:
    """Weekday calendar minus an optional set of holidays."""

    def __init__(self, holidays: Iterable[dt.date] = ()):
        self.holidays = frozenset(holidays)

    @classmethod
    def from_holiday_file(cls, path: str | Path) -> "TradingCalendar":
        """One ISO date per line; blank lines and '#' comments ignored."""
        holidays = []
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            holidays.append(dt.date.fromisoformat(line))
        return cls(holidays)

    def is_trading_day(self, day: dt.date) -> bool:
        return day.weekday() < 5 and day not in self.holidays

    def days_between(self, start: dt.date, end: dt.date) -> int:
        """Number of trading days in the half-open interval (start, end]."""
        if end <= start:
            return 0
        n = 0
        day = start
        while day < end:
            day += dt.timedelta(days=1)
            if self.is_trading_day(day):
                n += 1
        return n


@dataclass(frozen=True)
class OptionQuote:
    trade_date: dt.date
    expiry_date: dt.date
    strike: float
    kind: str  # "call" or "put"
    price: float
    underlying_price: float

    def validate(self) -> None:
        if self.kind not in ("call", "put"):
            raise ValueError(f"kind must be call or put, got {self.kind!r}")
        if self.expiry_date <= self.trade_date:
            raise ValueError("expiry_date must be after trade_date")
        if self.strike <= 0:
            raise ValueError("strike must be positive")
        if self.underlying_price <= 0:
            raise ValueError("underlying_price must be positive")
        if self.price < 0:
            raise ValueError("price must be nonnegative")


@dataclass(frozen=True)
class RatePoint:
    date: dt.date
    rate: float


@dataclass
class ProxyPanel:
    """Raw daily sentiment-proxy observations, one row per date."""

    dates: tuple[dt.date, ...]
    n_up: np.ndarray
    n_down: np.ndarray
    volume: np.ndarray
    float_cap: np.ndarray
    cef_nav: np.ndarray
    cef_price: np.ndarray

    def __post_init__(self):
        n = len(self.dates)
        for name in ("n_up", "n_down", "volume", "float_cap", "cef_nav", "cef_price"):
            col = np.asarray(getattr(self, name), dtype=float)
            if col.shape != (n,):
                raise SchemaMismatch(f"column {name} has length {col.shape}, expected {n}")
            setattr(self, name, col)
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise SchemaMismatch("proxy dates must be strictly increasing")


@dataclass
class AlignedPanel:
    """Dated value columns restricted to the common calendar of all inputs."""

    dates: tuple[dt.date, ...]
    columns: dict[str, np.ndarray]
    dropped: dict[str, tuple[dt.date, ...]] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.dates)
        for name, col in self.columns.items():
            col = np.asarray(col, dtype=float)
            if col.shape != (n,):
                raise SchemaMismatch(f"column {name} has length {col.shape[0]}, expected {n}")
            if not np.all(np.isfinite(col)):
                raise SchemaMismatch(f"column {name} contains non-finite values")
            self.columns[name] = col
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise SchemaMismatch("panel dates must be strictly increasing")

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]


@dataclass(frozen=True)
class RejectedRow:
    line: int
    reason: str


def _open_reader(path: str | Path):
    fh = open(path, "r", encoding="utf-8", newline="")
    return fh, csv.reader(fh)


def _header_index(header: Sequence[str], required: Sequence[str], schema: Mapping[str, str] | None) -> dict[str, int]:
    """Map canonical column names to positions, honoring a rename map."""
    rename = dict(schema or {})
    positions = {}
    stripped = [h.strip() for h in header]
    for name in required:
        actual = rename.get(name, name)
        if actual not in stripped:
            raise MissingColumn(f"column {actual!r} not found in header {stripped}")
        positions[name] = stripped.index(actual)
    return positions


def _parse_date(text: str) -> dt.date:
    return dt.date.fromisoformat(text.strip())


def load_option_quotes(
    path: str | Path, schema: Mapping[str, str] | None = None
) -> tuple[list[OptionQuote], list[RejectedRow]]:
    """Load option quotes; bad rows are returned as rejects, not raised.

    `schema` optionally maps canonical column names to the file's actual
    header names. Returns (quotes, rejected rows with line numbers).
    """
    fh, reader = _open_reader(path)
    quotes: list[OptionQuote] = []
    rejects: list[RejectedRow] = []
    with fh:
        header = next(reader)
        pos = _header_index(header, QUOTE_COLUMNS, schema)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                quote = OptionQuote(
                    trade_date=_parse_date(row[pos["trade_date"]]),
                    expiry_date=_parse_date(row[pos["expiry_date"]]),
                    strike=float(row[pos["strike"]]),
                    kind=row[pos["kind"]].strip().lower(),
                    price=float(row[pos["price"]]),
                    underlying_price=float(row[pos["underlying_price"]]),
                )
            except (ValueError, IndexError) as exc:
                rejects.append(RejectedRow(lineno, str(UnparsableValue(lineno, str(exc)))))
                continue
            try:
                quote.validate()
            except ValueError as exc:
                rejects.append(RejectedRow(lineno, str(InvariantViolation(lineno, str(exc)))))
                continue
            quotes.append(quote)
    return quotes, rejects


def load_rates(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    bounds: tuple[float, float] = (-0.05, 0.5),
) -> tuple[list[RatePoint], list[RejectedRow]]:
    """Load the risk-free-rate series; rates outside `bounds` are rejected."""
    lo, hi = bounds
    fh, reader = _open_reader(path)
    points: list[RatePoint] = []
    rejects: list[RejectedRow] = []
    with fh:
        header = next(reader)
        pos = _header_index(header, RATE_COLUMNS, schema)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                day = _parse_date(row[pos["date"]])
                rate = float(row[pos["rate"]])
            except (ValueError, IndexError) as exc:
                rejects.append(RejectedRow(lineno, str(UnparsableValue(lineno, str(exc)))))
                continue
            if not np.isfinite(rate) or not (lo < rate < hi):
                rejects.append(
                    RejectedRow(lineno, str(InvariantViolation(lineno, f"rate {rate} outside ({lo}, {hi})")))
                )
                continue
            points.append(RatePoint(day, rate))
    return points, rejects


def load_proxies(path: str | Path, schema: Mapping[str, str] | None = None) -> ProxyPanel:
    """Load the raw sentiment-proxy panel. Structural problems are fatal."""
    fh, reader = _open_reader(path)
    rows = []
    with fh:
        header = next(reader)
        pos = _header_index(header, PROXY_COLUMNS, schema)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append(
                    (
                        _parse_date(row[pos["date"]]),
                        float(row[pos["n_up"]]),
                        float(row[pos["n_down"]]),
                        float(row[pos["volume"]]),
                        float(row[pos["float_cap"]]),
                        float(row[pos["cef_nav"]]),
                        float(row[pos["cef_price"]]),
                    )
                )
            except (ValueError, IndexError) as exc:
                raise UnparsableValue(lineno, str(exc)) from exc
            if rows[-1][1] < 0 or rows[-1][2] < 0:
                raise InvariantViolation(lineno, "advance/decline counts must be nonnegative")
            if rows[-1][4] <= 0:
                raise InvariantViolation(lineno, "float_cap must be positive")
            if rows[-1][5] <= 0 or rows[-1][6] <= 0:
                raise InvariantViolation(lineno, "fund NAV and price must be positive")
    rows.sort(key=lambda r: r[0])
    cols = list(zip(*rows)) if rows else [[]] * 7
    return ProxyPanel(
        dates=tuple(cols[0]),
        n_up=np.array(cols[1], dtype=float),
        n_down=np.array(cols[2], dtype=float),
        volume=np.array(cols[3], dtype=float),
        float_cap=np.array(cols[4], dtype=float),
        cef_nav=np.array(cols[5], dtype=float),
        cef_price=np.array(cols[6], dtype=float),
    )


def filter_quotes(
    quotes: Sequence[OptionQuote],
    min_days_to_expiry: int = 5,
    calendar: TradingCalendar | None = None,
) -> list[OptionQuote]:
    """Drop quotes with fewer than `min_days_to_expiry` trading days left."""
    cal = calendar or TradingCalendar()
    return [q for q in quotes if cal.days_between(q.trade_date, q.expiry_date) >= min_days_to_expiry]


def align_calendar(
    series: Mapping[str, tuple[Sequence[dt.date], Sequence[float]]],
) -> AlignedPanel:
    """Intersect the calendars of named (dates, values) series.

    Returns a panel on the common dates plus, per input, the dates it lost.
    """
    if not series:
        raise EmptyIntersection("no input series")
    date_sets = {}
    for name, (dates, values) in series.items():
        dates = tuple(dates)
        if len(dates) != len(values):
            raise SchemaMismatch(f"series {name}: {len(dates)} dates vs {len(values)} values")
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise SchemaMismatch(f"series {name}: dates must be strictly increasing and unique")
        date_sets[name] = set(dates)

    common = set.intersection(*date_sets.values())
    if not common:
        raise EmptyIntersection("input series share no dates")
    ordered = tuple(sorted(common))

    columns = {}
    dropped = {}
    for name, (dates, values) in series.items():
        lookup = dict(zip(dates, values))
        columns[name] = np.array([lookup[d] for d in ordered], dtype=float)
        lost = tuple(d for d in dates if d not in common)
        if lost:
            dropped[name] = lost
    return AlignedPanel(dates=ordered, columns=columns, dropped=dropped)


# --- CSV writing (shared by the CLI artifact emitters) ---

def format_float(x: float) -> str:
    """Canonical, reproducible float rendering (shortest round-trip repr)."""
    if x != x:
        return "nan"
    return repr(float(x))


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence],
    metadata: Mapping[str, str] | None = None,
) -> None:
    """Write a CSV with optional '# key=value' metadata comment lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [format_float(c) if isinstance(c, float) else str(c) for c in row]
            fh.write(",".join(cells) + "\n")


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]], dict[str, str]]:
    """Read a CSV written by `write_csv`, returning header, rows, metadata."""
    metadata = {}
    header: list[str] = []
    rows: list[list[str]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for raw in csv.reader(fh):
            if not raw:
                continue
            if raw[0].startswith("#"):
                text = ",".join(raw).lstrip("#").strip()
                if "=" in text:
                    key, _, value = text.partition("=")
                    metadata[key.strip()] = value.strip()
                continue
            if not header:
                header = [c.strip() for c in raw]
            else:
                rows.append(raw)
    return header, rows, metadata


def write_panel(path: str | Path, panel: AlignedPanel, metadata: Mapping[str, str] | None = None) -> None:
    names = list(panel.columns)
    rows = (
        [panel.dates[i].isoformat()] + [float(panel.columns[n][i]) for n in names]
        for i in range(len(panel.dates))
    )
    write_csv(path, ["date"] + names, rows, metadata)


def read_panel(path: str | Path) -> AlignedPanel:
    header, rows, _ = read_csv(path)
    if not header or header[0] != "date":
        raise SchemaMismatch(f"panel file must start with a 'date' column, got {header}")
    dates = tuple(_parse_date(r[0]) for r in rows)
    columns = {
        name: np.array([float(r[j + 1]) for r in rows]) for j, name in enumerate(header[1:])
    }
    return AlignedPanel(dates=dates, columns=columns)

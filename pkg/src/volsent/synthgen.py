"""Seeded synthetic scenarios: option worlds priced from a known vol
function, factor-model sentiment proxies, and VAR panels with published
ground truth.

Every generator emits its truth alongside the data so tests never
re-derive it. Randomness comes from numpy's default PCG64 generator keyed
by the scenario seed, which is reproducible across platforms.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .data_io import OptionQuote, RatePoint, TradingCalendar, write_csv
from .errors import UnstableSpec
from .surface import GridConfig, IVSurfaceGrid, bs_price, strike_code
from .varfit import NONPARAM_LEVELS, StatePanel, VarModel

START_DATE = dt.date(2020, 1, 2)


@dataclass
class ScenarioSpec:
    name: str
    horizon: int  # trading days; 0 yields empty outputs with valid headers
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError(f"horizon must be nonnegative, got {self.horizon}")


def trading_dates(n: int, start: dt.date = START_DATE, calendar: TradingCalendar | None = None) -> list[dt.date]:
    cal = calendar or TradingCalendar()
    dates = []
    day = start
    while len(dates) < n:
        if cal.is_trading_day(day):
            dates.append(day)
        day += dt.timedelta(days=1)
    return dates


def flat_vol(level: float = 0.2) -> Callable[[float, float], float]:
    return lambda tau, m: level


def smirk_vol(base: float = 0.2, slope: float = 0.3) -> Callable[[float, float], float]:
    """Downside smirk: vol rises linearly below the money."""
    return lambda tau, m: base + slope * max(1.0 - m, 0.0)


@dataclass
class OptionWorld:
    quotes: list[OptionQuote]
    rates: list[RatePoint]
    truth: list[IVSurfaceGrid]
    spot: dict[dt.date, float]


def _latent_factor(spec: ScenarioSpec) -> np.ndarray:
    """Standardized AR(1) sentiment factor shared by proxies and vol level."""
    rng = np.random.default_rng(spec.seed + 1)
    n = spec.horizon
    persistence = spec.params.get("factor_persistence", 0.8)
    factor = np.zeros(n)
    shocks = rng.standard_normal(n)
    for t in range(1, n):
        factor[t] = persistence * factor[t - 1] + shocks[t]
    if n > 1 and factor.std() > 0:
        factor = (factor - factor.mean()) / factor.std()
    return factor


class _VolNoiseField:
    """Per-grid-cell AR(1) vol perturbations, bilinear between nodes.

    Gives each surface cell idiosyncratic dynamics (a common level alone
    leaves the VAR state collinear) while keeping the daily vol function
    smooth and exactly priceable at any (tau, moneyness)."""

    def __init__(self, rng, n_days: int, taus, ms, scale: float, persistence: float = 0.9):
        self.taus = np.asarray(sorted(taus), dtype=float)
        self.ms = np.asarray(sorted(ms), dtype=float)
        shocks = rng.normal(0.0, scale, size=(n_days, len(self.taus), len(self.ms)))
        self.values = np.zeros_like(shocks)
        for t in range(1, n_days):
            self.values[t] = persistence * self.values[t - 1] + shocks[t]

    def __call__(self, day: int, tau: float, m: float) -> float:
        i = int(np.clip(np.searchsorted(self.taus, tau) - 1, 0, len(self.taus) - 2))
        j = int(np.clip(np.searchsorted(self.ms, m) - 1, 0, len(self.ms) - 2))
        wt = np.clip((tau - self.taus[i]) / (self.taus[i + 1] - self.taus[i]), 0.0, 1.0)
        wm = np.clip((m - self.ms[j]) / (self.ms[j + 1] - self.ms[j]), 0.0, 1.0)
        v = self.values[day]
        return float(
            (1 - wt) * (1 - wm) * v[i, j]
            + (1 - wt) * wm * v[i, j + 1]
            + wt * (1 - wm) * v[i + 1, j]
            + wt * wm * v[i + 1, j + 1]
        )


def gen_option_world(spec: ScenarioSpec) -> OptionWorld:
    """Quotes priced exactly from the scenario's vol function.

    Params: vol ('flat' | 'smirk'), level/base/slope, rate, expiry_days,
    quote_moneyness, spot0, spot_vol (daily lognormal step), grid. A daily
    AR(1) level path (level_vol > 0) makes the surface move, cell_vol adds
    per-grid-cell AR(1) perturbations, and a sentiment_coupling loading
    feeds yesterday's latent sentiment factor into today's vol level, which
    the proxy generator shares.
    """
    params = spec.params
    kind = params.get("vol", "flat")
    if kind == "flat":
        vol_fn = flat_vol(params.get("level", 0.2))
    elif kind == "smirk":
        vol_fn = smirk_vol(params.get("base", 0.2), params.get("slope", 0.3))
    else:
        raise ValueError(f"unknown vol function {kind!r}")

    rate = params.get("rate", 0.025)
    expiry_days = tuple(params.get("expiry_days", (15, 45, 100, 200, 270)))
    quote_m = tuple(params.get("quote_moneyness", (0.85, 0.90, 0.95, 1.00, 1.05, 1.10, 1.15)))
    grid = GridConfig.from_name(params.get("grid", "default7"))
    spot0 = params.get("spot0", 100.0)
    spot_step = params.get("spot_vol", 0.01)
    level_vol = params.get("level_vol", 0.0)
    level_persistence = params.get("level_persistence", 0.9)
    coupling = params.get("sentiment_coupling", 0.0)
    cell_vol = params.get("cell_vol", 0.0)

    rng = np.random.default_rng(spec.seed)
    dates = trading_dates(spec.horizon)
    n = spec.horizon
    spots = spot0 * np.exp(np.cumsum(rng.normal(0.0, spot_step, size=n))) if n else np.array([])

    level = np.zeros(n)
    if n and (level_vol > 0 or coupling != 0.0):
        factor = _latent_factor(spec)
        level_shocks = rng.normal(0.0, level_vol, size=n) if level_vol > 0 else np.zeros(n)
        for t in range(1, n):
            level[t] = level_persistence * level[t - 1] + coupling * factor[t - 1] + level_shocks[t]
        level = np.clip(level, -0.1, 0.5)

    field = None
    if n and cell_vol > 0:
        field = _VolNoiseField(
            rng, n, [m / 12.0 for m in grid.maturities], grid.moneyness_levels, cell_vol
        )

    quotes: list[OptionQuote] = []
    rates: list[RatePoint] = []
    truth: list[IVSurfaceGrid] = []
    spot_map: dict[dt.date, float] = {}
    for i, day in enumerate(dates):
        S = float(spots[i])
        spot_map[day] = S
        rates.append(RatePoint(day, rate))
        if field is None:
            day_vol = lambda tau, m: max(vol_fn(tau, m) + level[i], 0.02)
        else:
            day_vol = lambda tau, m: max(vol_fn(tau, m) + level[i] + field(i, tau, m), 0.02)
        for days in expiry_days:
            expiry = day + dt.timedelta(days=days)
            tau = days / 365.0
            for m in quote_m:
                K = m * S
                option_kind = "call" if m >= 1.0 else "put"
                price = bs_price(S, K, rate, tau, day_vol(tau, m), option_kind)
                quotes.append(OptionQuote(day, expiry, K, option_kind, price, S))
        values = np.array(
            [[day_vol(months / 12.0, m) for m in grid.moneyness_levels] for months in grid.maturities]
        )
        truth.append(
            IVSurfaceGrid(
                date=day,
                maturities=grid.maturities,
                moneyness_levels=grid.moneyness_levels,
                values=values,
            )
        )
    return OptionWorld(quotes=quotes, rates=rates, truth=truth, spot=spot_map)


def write_option_world(world: OptionWorld, out_dir: str | Path) -> None:
    out = Path(out_dir)
    write_csv(
        out / "quotes.csv",
        ["trade_date", "expiry_date", "strike", "kind", "price", "underlying_price"],
        (
            [q.trade_date.isoformat(), q.expiry_date.isoformat(), q.strike, q.kind, q.price, q.underlying_price]
            for q in world.quotes
        ),
    )
    write_csv(out / "rates.csv", ["date", "rate"], ([r.date.isoformat(), r.rate] for r in world.rates))
    rows = []
    for surf in world.truth:
        for i, months in enumerate(surf.maturities):
            for j, m in enumerate(surf.moneyness_levels):
                rows.append([surf.date.isoformat(), months, m, float(surf.values[i, j])])
    write_csv(out / "truth_surface.csv", ["date", "tau_months", "moneyness", "iv"], rows)


def gen_proxies(spec: ScenarioSpec) -> tuple[list[dt.date], np.ndarray, dict[str, np.ndarray]]:
    """Sentiment proxies loading on one latent factor plus noise.

    Returns (dates, latent factor, raw proxy columns in the proxies.csv
    schema). The latent factor is the generator's ground truth.
    """
    params = spec.params
    rng = np.random.default_rng(spec.seed + 2)
    n = spec.horizon
    dates = trading_dates(n)
    factor = _latent_factor(spec)

    noise = params.get("proxy_noise", 0.3)
    n_stocks = params.get("n_stocks", 1000)
    breadth = np.clip(0.5 + 0.15 * factor + noise * 0.1 * rng.normal(size=n), 0.05, 0.95)
    n_up = np.round(n_stocks * breadth)
    n_down = n_stocks - n_up
    volume = 5e9 * np.exp(0.2 * factor + noise * 0.1 * rng.normal(size=n))
    float_cap = np.full(n, 1e11)
    cef_nav = np.full(n, 1.0)
    cef_price = np.clip(1.0 + 0.05 * factor + noise * 0.02 * rng.normal(size=n), 0.5, 1.5)
    columns = {
        "n_up": n_up,
        "n_down": n_down,
        "volume": volume,
        "float_cap": float_cap,
        "cef_nav": cef_nav,
        "cef_price": cef_price,
    }
    return dates, factor, columns


def write_proxies(path: str | Path, dates: Sequence[dt.date], columns: dict[str, np.ndarray]) -> None:
    names = ["n_up", "n_down", "volume", "float_cap", "cef_nav", "cef_price"]
    rows = (
        [dates[i].isoformat()] + [float(columns[n][i]) for n in names]
        for i in range(len(dates))
    )
    write_csv(path, ["date"] + names, rows)


@dataclass
class TrueModel:
    var_names: tuple[str, ...]
    p: int
    intercept: np.ndarray
    phi: np.ndarray  # (p, n, n)
    gamma: np.ndarray
    exog_names: tuple[str, ...]
    sigma: np.ndarray

    def to_json(self, path: str | Path) -> None:
        payload = {
            "var_names": list(self.var_names),
            "p": self.p,
            "intercept": self.intercept.tolist(),
            "phi": [m.tolist() for m in self.phi],
            "gamma": self.gamma.tolist(),
            "exog_names": list(self.exog_names),
            "sigma": self.sigma.tolist(),
        }
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _companion_modulus(phi: np.ndarray) -> float:
    p, n, _ = phi.shape
    comp = np.zeros((n * p, n * p))
    for k in range(p):
        comp[:n, k * n:(k + 1) * n] = phi[k]
    if p > 1:
        comp[n:, :-n] = np.eye(n * (p - 1))
    return float(np.max(np.abs(np.linalg.eigvals(comp))))


def gen_var_panel(
    spec: ScenarioSpec,
    burn_in: int = 500,
) -> tuple[StatePanel, TrueModel, StatePanel | None]:
    """Simulate a stable VAR; returns (panel, true model, exogenous panel).

    Params: var_names, phi (list of lag matrices), intercept, sigma (shock
    covariance), gamma/exog_names (optional contemporaneous exogenous terms).
    """
    params = spec.params
    phi = np.array(params["phi"], dtype=float)
    if phi.ndim == 2:
        phi = phi[None, :, :]
    p, n, _ = phi.shape
    names = tuple(params.get("var_names", tuple(f"y{i}" for i in range(n))))
    intercept = np.asarray(params.get("intercept", np.zeros(n)), dtype=float)
    sigma = np.asarray(params.get("sigma", np.eye(n)), dtype=float)
    gamma = np.asarray(params.get("gamma", np.zeros((n, 0))), dtype=float)
    exog_names = tuple(params.get("exog_names", ()))

    modulus = _companion_modulus(phi)
    if modulus >= 1.0:
        raise UnstableSpec(f"companion modulus {modulus:.4f} >= 1")

    rng = np.random.default_rng(spec.seed)
    T = spec.horizon
    total = burn_in + T
    if not sigma.any():
        shocks = np.zeros((total, n))
    else:
        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:  # positive semidefinite shock covariance
            w, v = np.linalg.eigh(sigma)
            chol = v @ np.diag(np.sqrt(np.clip(w, 0.0, None)))
        shocks = rng.standard_normal((total, n)) @ chol.T

    exog_values = None
    if gamma.size:
        exog_values = rng.standard_normal((total, gamma.shape[1]))

    y = np.zeros((total, n))
    for t in range(total):
        acc = intercept + shocks[t]
        for k in range(p):
            if t - k - 1 >= 0:
                acc = acc + phi[k] @ y[t - k - 1]
        if exog_values is not None:
            acc = acc + gamma @ exog_values[t]
        y[t] = acc

    dates = tuple(trading_dates(T))
    panel = StatePanel(dates=dates, var_names=names, values=y[burn_in:])
    truth = TrueModel(
        var_names=names,
        p=p,
        intercept=intercept,
        phi=phi,
        gamma=gamma,
        exog_names=exog_names,
        sigma=sigma,
    )
    exog_panel = (
        StatePanel(dates=dates, var_names=exog_names, values=exog_values[burn_in:])
        if exog_values is not None
        else None
    )
    return panel, truth, exog_panel


def planted_sentiment_spec(
    seed: int,
    horizon: int,
    loading: float = 0.3,
    iv_level: float = 0.2,
    persistence: float = 0.5,
    iv_shock: float = 0.02,
    sentiment_shock: float = 0.05,
    maturities: Sequence[int] = (1, 3, 6, 12),
    levels: Sequence[float] = NONPARAM_LEVELS,
) -> ScenarioSpec:
    """VAR(1) world where HFS drives next-day at-the-money vols.

    Surface variables mean-revert around `iv_level`; the planted loading
    feeds yesterday's HFS into today's near-the-money columns.
    """
    iv_names = [f"iv_{t}m_{strike_code(m)}" for t in maturities for m in levels]
    names = iv_names + ["hfs", "lfs"]
    n = len(names)
    phi = persistence * np.eye(n)
    hfs_idx = names.index("hfs")
    atm_code = strike_code(0.975)
    for j, name in enumerate(iv_names):
        if name.endswith(atm_code):
            phi[j, hfs_idx] = loading
    sigma = np.diag([iv_shock**2] * len(iv_names) + [sentiment_shock**2] * 2)
    mean = np.array([iv_level] * len(iv_names) + [0.0, 0.0])
    intercept = (np.eye(n) - phi) @ mean
    return ScenarioSpec(
        name="planted-sentiment",
        horizon=horizon,
        seed=seed,
        params={
            "var_names": tuple(names),
            "phi": phi,
            "intercept": intercept,
            "sigma": sigma,
        },
    )


def true_model_to_varmodel(truth: TrueModel, nobs: int = 0) -> VarModel:
    """Wrap generator truth in the fitted-model container (zero SEs)."""
    n = len(truth.var_names)
    return VarModel(
        var_names=truth.var_names,
        p=truth.p,
        intercept=truth.intercept,
        phi=truth.phi,
        gamma=truth.gamma.reshape(n, -1),
        exog_names=truth.exog_names,
        sigma=truth.sigma,
        nobs=nobs,
        se_intercept=np.zeros(n),
        se_phi=np.zeros_like(truth.phi),
        se_gamma=np.zeros((n, truth.gamma.reshape(n, -1).shape[1])),
    )

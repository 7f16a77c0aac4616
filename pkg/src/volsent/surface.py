"""Option pricing, implied-volatility inversion, and fixed-grid surfaces.

A surface is a maturities-by-moneyness matrix of implied vols on the fixed
grid (1/3/6/12 months; strike-over-spot levels descending from 1.300 to
0.600). Per-maturity smile descriptors (curvature, skewness) and per-level
term slopes form the parametric state used by the VAR stage.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .data_io import OptionQuote, RatePoint
from .errors import (
    AllInversionsFailed,
    DegenerateSmile,
    InsufficientQuotes,
    NoConvergence,
    NonPositiveInput,
    NonUniformSpacing,
    OutOfHull,
    PriceOutOfBounds,
    TooFewPoints,
    UnknownLevel,
)

GRID_MATURITIES_MONTHS = (1, 3, 6, 12)
# Seven-level default; Tables in the source domain include the 1.000 level.
MONEYNESS_DEFAULT7 = (1.300, 1.100, 1.025, 1.000, 0.975, 0.900, 0.600)
# Six-level variant matching the 24-point grid description.
MONEYNESS_PAPER24 = (1.300, 1.100, 1.025, 0.975, 0.900, 0.600)

VOL_FLOOR = 1e-4
VOL_CAP = 5.0
_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / _SQRT2))


def _norm_pdf(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def bs_price(S: float, K: float, r: float, tau: float, sigma: float, kind: str = "call") -> float:
    """European option price; sigma=0 degenerates to discounted intrinsic."""
    if S <= 0 or K <= 0 or tau <= 0:
        raise NonPositiveInput(f"S={S}, K={K}, tau={tau} must all be positive")
    if sigma < 0:
        raise NonPositiveInput(f"sigma={sigma} must be nonnegative")
    disc_k = K * math.exp(-r * tau)
    if sigma == 0.0:
        intrinsic = S - disc_k if kind == "call" else disc_k - S
        return max(intrinsic, 0.0)
    srt = sigma * math.sqrt(tau)
    d1 = (math.log(S / K) + (r + 0.5 * sigma * sigma) * tau) / srt
    d2 = d1 - srt
    if kind == "call":
        return S * _norm_cdf(d1) - disc_k * _norm_cdf(d2)
    if kind == "put":
        return disc_k * _norm_cdf(-d2) - S * _norm_cdf(-d1)
    raise NonPositiveInput(f"kind must be call or put, got {kind!r}")


def bs_vega(S: float, K: float, r: float, tau: float, sigma: float) -> float:
    if sigma <= 0:
        return 0.0
    srt = sigma * math.sqrt(tau)
    d1 = (math.log(S / K) + (r + 0.5 * sigma * sigma) * tau) / srt
    return S * math.sqrt(tau) * _norm_pdf(d1)


def _price_bounds(S: float, K: float, r: float, tau: float, kind: str) -> tuple[float, float]:
    disc_k = K * math.exp(-r * tau)
    if kind == "call":
        return max(S - disc_k, 0.0), S
    return max(disc_k - S, 0.0), disc_k


def implied_vol(
    price: float,
    S: float,
    K: float,
    r: float,
    tau: float,
    kind: str = "call",
    price_tol: float = 1e-8,
    sigma_tol: float = 1e-9,
    max_iter: int = 100,
) -> float:
    """Invert the pricing formula for sigma.

    Safeguarded Newton on vega with a maintained bisection bracket; the
    starting point is the at-the-money approximation sqrt(2*pi/tau)*price/S.
    Convergence requires the price to match within price_tol and the vol to
    be pinned to sigma_tol, so accuracy survives low-vega regions.
    """
    if S <= 0 or K <= 0 or tau <= 0:
        raise NonPositiveInput(f"S={S}, K={K}, tau={tau} must all be positive")
    lower, upper = _price_bounds(S, K, r, tau, kind)
    if not (lower < price < upper):
        raise PriceOutOfBounds(
            f"price {price} outside no-arbitrage bounds ({lower}, {upper}) for {kind}"
        )

    lo, hi = VOL_FLOOR, VOL_CAP
    f_lo = bs_price(S, K, r, tau, lo, kind) - price
    f_hi = bs_price(S, K, r, tau, hi, kind) - price
    if f_lo > 0:
        if abs(f_lo) <= price_tol:
            return lo
        raise NoConvergence(f"price {price} below the sigma={lo} price; vol under the floor")
    if f_hi < 0:
        if abs(f_hi) <= price_tol:
            return hi
        raise NoConvergence(f"price {price} above the sigma={hi} price; vol over the cap")

    sigma = min(max(math.sqrt(2.0 * math.pi / tau) * price / S, lo), hi)
    for _ in range(max_iter):
        f = bs_price(S, K, r, tau, sigma, kind) - price
        if f > 0:
            hi = sigma
        else:
            lo = sigma
        vega = bs_vega(S, K, r, tau, sigma)
        if abs(f) <= price_tol and (abs(f) <= sigma_tol * vega or hi - lo <= sigma_tol):
            return sigma
        if vega > 1e-12:
            step = sigma - f / vega
        else:
            step = math.nan
        # fall back to bisection whenever Newton leaves the bracket
        sigma = step if lo < step < hi else 0.5 * (lo + hi)
    raise NoConvergence(f"no convergence after {max_iter} iterations (last sigma={sigma})")


@dataclass(frozen=True)
class IVPoint:
    tau: float
    moneyness: float
    iv: float


@dataclass
class IVSurfaceGrid:
    """One date's implied vols on the fixed maturity-by-moneyness grid."""

    date: dt.date
    maturities: tuple[int, ...]  # months
    moneyness_levels: tuple[float, ...]  # descending, K/S
    values: np.ndarray  # shape (len(maturities), len(moneyness_levels))
    n_inversion_failures: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = (len(self.maturities), len(self.moneyness_levels))
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("surface contains non-finite vols")
        if np.any(self.values <= 0) or np.any(self.values >= VOL_CAP):
            raise ValueError(f"surface vols must lie in (0, {VOL_CAP})")

    def taus(self) -> np.ndarray:
        return np.array(self.maturities, dtype=float) / 12.0


@dataclass
class SurfaceParamVector:
    """Per-date smile descriptors: one skew and curvature per maturity, one
    term slope per moneyness level. Degenerate (flat) smiles carry 0 with a
    flag rather than an error."""

    date: dt.date
    skew_by_tau: np.ndarray
    cur_by_tau: np.ndarray
    slope_by_m: np.ndarray
    degenerate: tuple[bool, ...]

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.skew_by_tau, self.cur_by_tau, self.slope_by_m])


@dataclass
class GridConfig:
    maturities: tuple[int, ...] = GRID_MATURITIES_MONTHS
    moneyness_levels: tuple[float, ...] = MONEYNESS_DEFAULT7
    otm_side_only: bool = True  # calls for K/S >= 1, puts below
    min_strikes_per_expiry: int = 4
    curvature_mode: str = "corrected"  # or "paper-literal"

    @classmethod
    def from_name(cls, name: str) -> "GridConfig":
        if name == "default7":
            return cls()
        if name == "paper24":
            return cls(moneyness_levels=MONEYNESS_PAPER24)
        raise ValueError(f"unknown grid {name!r}")


def _smile_spline(moneyness: np.ndarray, vols: np.ndarray) -> CubicSpline:
    order = np.argsort(moneyness)
    return CubicSpline(moneyness[order], vols[order])


def _eval_clamped(spline: CubicSpline, x: np.ndarray) -> np.ndarray:
    lo, hi = spline.x[0], spline.x[-1]
    return np.asarray(spline(np.clip(x, lo, hi)), dtype=float)


def build_grid(
    quotes: Sequence[OptionQuote],
    rate: RatePoint,
    config: GridConfig | None = None,
) -> IVSurfaceGrid:
    """Invert one date's quotes and interpolate them onto the fixed grid.

    Per listed expiry, a cubic spline in moneyness is fit over the inverted
    vols; grid maturities between listed expiries are reached by linear
    interpolation of total variance at fixed moneyness. Quotes that fail
    inversion are skipped and counted.
    """
    config = config or GridConfig()
    if not quotes:
        raise InsufficientQuotes("no quotes supplied")
    trade_date = quotes[0].trade_date
    if any(q.trade_date != trade_date for q in quotes):
        raise InsufficientQuotes("quotes must share one trade date")

    # choose the quote used for each (expiry, strike): OTM side if available
    chosen: dict[tuple[dt.date, float], OptionQuote] = {}
    for q in quotes:
        key = (q.expiry_date, q.strike)
        otm_kind = "call" if q.strike / q.underlying_price >= 1.0 else "put"
        if key not in chosen:
            chosen[key] = q
        elif config.otm_side_only and q.kind == otm_kind and chosen[key].kind != otm_kind:
            chosen[key] = q

    failures = 0
    by_expiry: dict[dt.date, list[IVPoint]] = {}
    for (expiry, _), q in sorted(chosen.items()):
        tau = (expiry - trade_date).days / 365.0
        m = q.strike / q.underlying_price
        try:
            iv = implied_vol(q.price, q.underlying_price, q.strike, rate.rate, tau, q.kind)
        except (PriceOutOfBounds, NoConvergence):
            failures += 1
            continue
        by_expiry.setdefault(expiry, []).append(IVPoint(tau, m, iv))

    if not by_expiry:
        raise AllInversionsFailed(f"all {len(chosen)} inversions failed")

    smiles = []  # (tau, spline) per usable expiry, ascending in tau
    for expiry in sorted(by_expiry):
        points = by_expiry[expiry]
        ms = np.array([p.moneyness for p in points])
        if len(np.unique(ms)) < config.min_strikes_per_expiry:
            continue
        vols = np.array([p.iv for p in points])
        smiles.append((points[0].tau, _smile_spline(ms, vols)))
    if len(smiles) < 2:
        raise InsufficientQuotes(
            f"need >= 2 expiries with >= {config.min_strikes_per_expiry} strikes, have {len(smiles)}"
        )

    taus = np.array([t for t, _ in smiles])
    levels = np.array(sorted(config.moneyness_levels))
    values = np.empty((len(config.maturities), len(config.moneyness_levels)))
    snap_tol = 0.6 / 365.0  # listed expiries within ~half a day count as on-node
    for i, months in enumerate(config.maturities):
        tau_g = months / 12.0
        nearest = int(np.argmin(np.abs(taus - tau_g)))
        on_node = abs(taus[nearest] - tau_g) < snap_tol
        if on_node or tau_g <= taus[0] or tau_g >= taus[-1]:
            # on a listed expiry (within half a day) or outside the listed
            # range: use the nearest expiry's smile, flat in tau
            k = nearest if on_node else (0 if tau_g <= taus[0] else len(taus) - 1)
            row_vols = _eval_clamped(smiles[k][1], levels)
        else:
            j = int(np.searchsorted(taus, tau_g))
            t_lo, s_lo = smiles[j - 1]
            t_hi, s_hi = smiles[j]
            # total-variance-linear interpolation preserves flat-vol worlds
            ladder = np.unique(np.concatenate([s_lo.x, s_hi.x]))
            w_lo = t_lo * _eval_clamped(s_lo, ladder) ** 2
            w_hi = t_hi * _eval_clamped(s_hi, ladder) ** 2
            frac = (tau_g - t_lo) / (t_hi - t_lo)
            w = w_lo + frac * (w_hi - w_lo)
            iv_ladder = np.sqrt(np.maximum(w, 0.0) / tau_g)
            row_vols = _eval_clamped(_smile_spline(ladder, iv_ladder), levels)
        # map ascending-level evaluations back to the configured ordering
        order = np.argsort(config.moneyness_levels)
        row = np.empty(len(levels))
        row[np.array(order)] = row_vols
        values[i] = row

    return IVSurfaceGrid(
        date=trade_date,
        maturities=tuple(config.maturities),
        moneyness_levels=tuple(config.moneyness_levels),
        values=values,
        n_inversion_failures=failures,
    )


def interpolate(
    surface: IVSurfaceGrid, tau: float, m: float, extrapolation: str = "clamp"
) -> float:
    """Bicubic lookup: spline across moneyness per maturity, then across tau."""
    taus = surface.taus()
    levels = np.array(surface.moneyness_levels)
    order = np.argsort(levels)
    if extrapolation == "raise":
        if not (taus[0] <= tau <= taus[-1]) or not (levels[order][0] <= m <= levels[order][-1]):
            raise OutOfHull(f"(tau={tau}, m={m}) outside the grid hull")
    else:
        tau = float(np.clip(tau, taus[0], taus[-1]))
        m = float(np.clip(m, levels[order][0], levels[order][-1]))
    per_maturity = np.array(
        [CubicSpline(levels[order], surface.values[i][order])(m) for i in range(len(taus))]
    )
    return float(CubicSpline(taus, per_maturity)(tau))


def smile_curvature(
    smile: Sequence[tuple[float, float]], mode: str = "corrected"
) -> float:
    """Mean discrete curvature of an evenly spaced (strike, iv) smile.

    "corrected" squares the centered slope inside the (1 + s^2)^(3/2)
    denominator; "paper-literal" keeps the unsquared slope and divides the
    interior sum by n instead of n-2.
    """
    if len(smile) < 3:
        raise TooFewPoints(f"need >= 3 points, got {len(smile)}")
    strikes = np.array([k for k, _ in smile], dtype=float)
    ivs = np.array([v for _, v in smile], dtype=float)
    dk = np.diff(strikes)
    if np.any(dk <= 0):
        raise NonUniformSpacing("strikes must be strictly increasing")
    if np.max(np.abs(dk - dk[0])) > 1e-9 * abs(dk[0]):
        raise NonUniformSpacing(f"strike spacing not uniform: {dk}")
    h = dk[0]
    second = ivs[:-2] + ivs[2:] - 2.0 * ivs[1:-1]
    slope = (ivs[2:] - ivs[:-2]) / (2.0 * h)
    if mode == "corrected":
        terms = second / (h * h * (1.0 + slope**2) ** 1.5)
        return float(np.mean(terms))
    if mode == "paper-literal":
        terms = second / (h * h * (1.0 + slope) ** 1.5)
        return float(np.sum(terms) / len(smile))
    raise ValueError(f"unknown curvature mode {mode!r}")


def smile_skewness(ivs: Sequence[float]) -> float:
    """Third standardized moment of the smile's vol levels."""
    if len(ivs) < 3:
        raise TooFewPoints(f"need >= 3 points, got {len(ivs)}")
    x = np.asarray(ivs, dtype=float)
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    # rounding-noise variance counts as zero
    if m2 <= (1e-12 * max(1.0, float(np.max(np.abs(x))))) ** 2:
        raise DegenerateSmile("zero variance smile")
    m3 = float(np.mean(centered**3))
    return m3 / m2**1.5


def term_slope(surface: IVSurfaceGrid, m: float) -> float:
    """OLS slope of iv against tau (years) at a fixed grid moneyness level."""
    levels = surface.moneyness_levels
    matches = [j for j, lvl in enumerate(levels) if abs(lvl - m) < 1e-9]
    if not matches:
        raise UnknownLevel(f"moneyness {m} is not a grid level {levels}")
    if len(surface.maturities) < 2:
        raise TooFewPoints("need >= 2 maturities for a slope")
    taus = surface.taus()
    y = surface.values[:, matches[0]]
    tc = taus - taus.mean()
    return float(np.dot(tc, y - y.mean()) / np.dot(tc, tc))


# Uniform central band used for the per-maturity smile descriptors; the
# wing levels (1.300, 0.600) feed the term slopes and VAR state only.
CENTRAL_BAND = (0.90, 1.10)
CENTRAL_POINTS = 5


def _central_ladder(surface: IVSurfaceGrid, row: int) -> np.ndarray:
    levels = np.array(surface.moneyness_levels)
    order = np.argsort(levels)
    spline = CubicSpline(levels[order], surface.values[row][order])
    ladder = np.linspace(CENTRAL_BAND[0], CENTRAL_BAND[1], CENTRAL_POINTS)
    return np.asarray(spline(ladder), dtype=float)


def surface_params(surface: IVSurfaceGrid, curvature_mode: str = "corrected") -> SurfaceParamVector:
    """Descriptor vector: skew and curvature per maturity over the uniform
    central band, term slope per moneyness level."""
    n_tau = len(surface.maturities)
    skews = np.zeros(n_tau)
    curs = np.zeros(n_tau)
    degenerate = []
    ladder_x = np.linspace(CENTRAL_BAND[0], CENTRAL_BAND[1], CENTRAL_POINTS)
    for i in range(n_tau):
        ivs = _central_ladder(surface, i)
        curs[i] = smile_curvature(list(zip(ladder_x, ivs)), mode=curvature_mode)
        try:
            skews[i] = smile_skewness(ivs)
            degenerate.append(False)
        except DegenerateSmile:
            skews[i] = 0.0
            degenerate.append(True)
    slopes = np.array([term_slope(surface, m) for m in surface.moneyness_levels])
    return SurfaceParamVector(
        date=surface.date,
        skew_by_tau=skews,
        cur_by_tau=curs,
        slope_by_m=slopes,
        degenerate=tuple(degenerate),
    )


def strike_code(m: float) -> str:
    """Per-mille moneyness tag used in column names: 1.300 -> '1300'."""
    return f"{int(round(m * 1000)):04d}"


def param_names(config: GridConfig | None = None) -> list[str]:
    config = config or GridConfig()
    names = [f"skew_{t}m" for t in config.maturities]
    names += [f"cur_{t}m" for t in config.maturities]
    names += [f"slope_{strike_code(m)}" for m in config.moneyness_levels]
    return names

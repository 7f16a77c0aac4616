"""High-/low-frequency splitting of daily sentiment series.

Three routes: discrete Fourier truncation at a fixed period cutoff, empirical
mode decomposition with recombination of the leading modes, and a trailing
moving average. Every route reconstructs the input as HFS + LFS.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.stats import ttest_1samp

from .errors import ConstantSeries, SeriesTooShort, TooFewImfs
from .sentiment import SentimentSeries


@dataclass
class DecompositionResult:
    hfs: SentimentSeries
    lfs: SentimentSeries
    method: str
    params: dict


@dataclass
class ImfSet:
    """Ordered intrinsic mode functions plus the monotone-ish residual."""

    dates: tuple[dt.date, ...]
    imfs: list[np.ndarray]
    residual: np.ndarray

    def __len__(self) -> int:
        return len(self.imfs)


def _result(series: SentimentSeries, hfs: np.ndarray, lfs: np.ndarray, method: str, params: dict) -> DecompositionResult:
    tag = series.label or "sentiment"
    return DecompositionResult(
        hfs=SentimentSeries(series.dates, hfs, label=f"{tag}:hfs:{method}"),
        lfs=SentimentSeries(series.dates, lfs, label=f"{tag}:lfs:{method}"),
        method=method,
        params=params,
    )


def fft_amplitudes(series: SentimentSeries) -> tuple[np.ndarray, np.ndarray]:
    """(periods in days, spectral amplitudes) of the mean-removed series."""
    x = series.values - series.values.mean()
    spectrum = np.fft.rfft(x)
    freqs = np.fft.rfftfreq(len(x), d=1.0)
    with np.errstate(divide="ignore"):
        periods = np.where(freqs > 0, 1.0 / np.maximum(freqs, 1e-300), np.inf)
    return periods, np.abs(spectrum)


def fft_split(
    series: SentimentSeries, cutoff_period: float | str = 15.0
) -> DecompositionResult:
    """Fourier band split: components with period below the cutoff form HFS.

    cutoff_period='auto' places the cutoff at the amplitude minimum among
    bins with periods between 10 and 30 days.
    """
    n = len(series)
    auto = cutoff_period == "auto"
    if auto:
        periods, amps = fft_amplitudes(series)
        band = (periods >= 10.0) & (periods <= 30.0)
        if not band.any():
            raise SeriesTooShort(f"series of length {n} has no spectral bins in the 10-30 day band")
        idx = np.nonzero(band)[0]
        cutoff = float(periods[idx[np.argmin(amps[idx])]])
    else:
        cutoff = float(cutoff_period)
    if n < 4 * cutoff:
        raise SeriesTooShort(f"need length >= {4 * cutoff:.0f} for cutoff {cutoff}, got {n}")

    x = series.values
    mean = x.mean()
    spectrum = np.fft.rfft(x - mean)
    freqs = np.fft.rfftfreq(n, d=1.0)
    high = freqs > 1.0 / cutoff  # period < cutoff
    hfs = np.fft.irfft(np.where(high, spectrum, 0.0), n)
    lfs = x - hfs
    return _result(series, hfs, lfs, "fft", {"cutoff_period": cutoff, "auto": auto})


def fft_three_band(
    series: SentimentSeries, cutoff_period: float = 15.0, xlf_period: float = 115.0
) -> tuple[SentimentSeries, SentimentSeries, SentimentSeries]:
    """Optional three-band variant: (hfs, lfs, xlf).

    Periods below the cutoff form HFS, periods of at least xlf_period form
    the extreme low-frequency band (plus the mean), LFS is the remainder.
    Not an input to the VAR stage; exposed for spectral diagnostics.
    """
    if xlf_period <= cutoff_period:
        raise ValueError(f"xlf_period {xlf_period} must exceed cutoff_period {cutoff_period}")
    n = len(series)
    if n < 4 * xlf_period:
        raise SeriesTooShort(f"need length >= {4 * xlf_period:.0f}, got {n}")
    x = series.values
    mean = x.mean()
    spectrum = np.fft.rfft(x - mean)
    freqs = np.fft.rfftfreq(n, d=1.0)
    high = freqs > 1.0 / cutoff_period
    mid = (freqs <= 1.0 / cutoff_period) & (freqs > 1.0 / xlf_period)
    hfs = np.fft.irfft(np.where(high, spectrum, 0.0), n)
    lfs = np.fft.irfft(np.where(mid, spectrum, 0.0), n)
    xlf = x - hfs - lfs
    tag = series.label or "sentiment"
    return (
        SentimentSeries(series.dates, hfs, label=f"{tag}:hfs:fft3"),
        SentimentSeries(series.dates, lfs, label=f"{tag}:lfs:fft3"),
        SentimentSeries(series.dates, xlf, label=f"{tag}:xlf:fft3"),
    )


def _local_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of interior local maxima and minima; plateaus collapse to
    their midpoint."""
    d = np.diff(x)
    maxima, minima = [], []
    prev_sign = 0
    plateau_start = None
    for i, step in enumerate(d):
        if step == 0:
            if plateau_start is None:
                plateau_start = i
            continue
        sign = 1 if step > 0 else -1
        pivot = i if plateau_start is None else (plateau_start + i) // 2
        if prev_sign > 0 and sign < 0:
            maxima.append(pivot)
        elif prev_sign < 0 and sign > 0:
            minima.append(pivot)
        prev_sign = sign
        plateau_start = None
    return np.array(maxima, dtype=int), np.array(minima, dtype=int)


def count_zero_crossings(x: np.ndarray) -> int:
    signs = np.sign(x[x != 0])
    return int(np.sum(signs[1:] != signs[:-1]))


def _mirror_extend(idx: np.ndarray, values: np.ndarray, n: int, nbsym: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Reflect up to nbsym extrema across each series end."""
    left_n = min(nbsym, len(idx))
    right_n = min(nbsym, len(idx))
    left_pos = -idx[:left_n][::-1]
    left_val = values[:left_n][::-1]
    right_pos = 2 * (n - 1) - idx[-right_n:][::-1]
    right_val = values[-right_n:][::-1]
    pos = np.concatenate([left_pos, idx, right_pos])
    val = np.concatenate([left_val, values, right_val])
    pos, keep = np.unique(pos, return_index=True)
    return pos, val[keep]


def _envelope_mean(x: np.ndarray) -> np.ndarray | None:
    max_idx, min_idx = _local_extrema(x)
    if len(max_idx) < 2 or len(min_idx) < 2:
        return None
    t = np.arange(len(x), dtype=float)
    up_pos, up_val = _mirror_extend(max_idx, x[max_idx], len(x))
    lo_pos, lo_val = _mirror_extend(min_idx, x[min_idx], len(x))
    upper = CubicSpline(up_pos, up_val)(t)
    lower = CubicSpline(lo_pos, lo_val)(t)
    return 0.5 * (upper + lower)


def _is_imf_like(x: np.ndarray) -> bool:
    max_idx, min_idx = _local_extrema(x)
    extrema = len(max_idx) + len(min_idx)
    return abs(extrema - count_zero_crossings(x)) <= 1


def emd(
    series: SentimentSeries,
    max_imf: int = 10,
    sift_tolerance: float = 0.2,
    max_sift_iter: int = 50,
) -> ImfSet:
    """Empirical mode decomposition by envelope-mean sifting.

    Envelopes are cubic splines through mirror-extended extrema; a mode is
    accepted when successive sift iterates differ by less than the
    normalized-squared-deviation tolerance and the extrema/zero-crossing
    counts differ by at most one.
    """
    x = np.asarray(series.values, dtype=float)
    if len(x) < 16:
        raise SeriesTooShort(f"need >= 16 samples, got {len(x)}")
    if np.ptp(x) == 0.0:
        raise ConstantSeries("cannot decompose a constant series")

    imfs: list[np.ndarray] = []
    residual = x.copy()
    for _ in range(max_imf):
        h = residual.copy()
        mean_env = _envelope_mean(h)
        if mean_env is None:
            break
        for _ in range(max_sift_iter):
            h_new = h - mean_env
            denom = float(np.dot(h, h))
            sd = float(np.dot(h - h_new, h - h_new)) / denom if denom > 0 else 0.0
            h = h_new
            if sd < sift_tolerance and _is_imf_like(h):
                break
            mean_env = _envelope_mean(h)
            if mean_env is None:
                break
        imfs.append(h)
        residual = residual - h
        max_idx, min_idx = _local_extrema(residual)
        if len(max_idx) < 2 or len(min_idx) < 2:
            break
    return ImfSet(dates=series.dates, imfs=imfs, residual=residual)


def emd_split(
    series: SentimentSeries,
    imfs: ImfSet,
    k: int | str = 4,
) -> DecompositionResult:
    """Recombine modes: the first k form HFS, the rest plus residual LFS.

    k='auto' picks one less than the first mode whose mean is significantly
    nonzero (one-sample t-test at 5%); if no mode qualifies, the default of
    four (clamped to the available count) is used.
    """
    n_imfs = len(imfs.imfs)
    if k == "auto":
        chosen = None
        for i, imf in enumerate(imfs.imfs, start=1):
            if ttest_1samp(imf, 0.0).pvalue < 0.05:
                chosen = i - 1
                break
        k_eff = chosen if chosen is not None else min(4, n_imfs)
        auto = True
    else:
        k_eff = int(k)
        auto = False
        if k_eff > n_imfs:
            raise TooFewImfs(f"asked for k={k_eff} but only {n_imfs} modes extracted")
    if k_eff < 0:
        raise TooFewImfs(f"k must be nonnegative, got {k_eff}")

    zeros = np.zeros_like(imfs.residual)
    hfs = np.sum(imfs.imfs[:k_eff], axis=0) if k_eff else zeros.copy()
    tail = np.sum(imfs.imfs[k_eff:], axis=0) if k_eff < n_imfs else zeros.copy()
    lfs = tail + imfs.residual
    return _result(series, hfs, lfs, "emd", {"k": k_eff, "auto": auto, "n_imfs": n_imfs})


def ma_split(series: SentimentSeries, window: int = 22) -> DecompositionResult:
    """Trailing mean forms LFS (expanding over the first window-1 days);
    the residual is HFS. Reconstruction is exact."""
    n = len(series)
    if n < window:
        raise SeriesTooShort(f"need >= {window} samples, got {n}")
    x = series.values
    csum = np.concatenate([[0.0], np.cumsum(x)])
    lfs = np.empty(n)
    for t in range(n):
        start = max(0, t - window + 1)
        lfs[t] = (csum[t + 1] - csum[start]) / (t + 1 - start)
    hfs = x - lfs
    return _result(series, hfs, lfs, "ma", {"window": window})


def split(series: SentimentSeries, method: str, **params) -> DecompositionResult:
    """Dispatch helper used by the CLI."""
    if method == "fft":
        return fft_split(series, params.get("cutoff_period", 15.0))
    if method == "emd":
        modes = emd(
            series,
            max_imf=params.get("max_imf", 10),
            sift_tolerance=params.get("sift_tolerance", 0.2),
        )
        return emd_split(series, modes, params.get("k", 4))
    if method == "ma":
        return ma_split(series, params.get("window", 22))
    raise ValueError(f"unknown decomposition method {method!r}")

"""SVG chart emitters mirroring the figures of the source domain.

All charts are written deterministically: a fixed hash salt and no
creation-date metadata, so identical inputs yield byte-identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .decompose import ImfSet, fft_amplitudes  # noqa: E402
from .sentiment import SentimentSeries  # noqa: E402
from .surface import IVSurfaceGrid  # noqa: E402
from .varfit import IrfResult  # noqa: E402

plt.rcParams["svg.hashsalt"] = "volsent"


def _save(fig, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def surface_snapshot(surface: IVSurfaceGrid, path: str | Path) -> None:
    """One smile line per grid maturity, moneyness on the x axis."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    order = sorted(range(len(surface.moneyness_levels)), key=lambda j: surface.moneyness_levels[j])
    xs = [surface.moneyness_levels[j] for j in order]
    for i, months in enumerate(surface.maturities):
        ax.plot(xs, [surface.values[i, j] for j in order], marker="o", label=f"{months}m")
    ax.set_xlabel("moneyness K/S")
    ax.set_ylabel("implied vol")
    ax.set_title(f"surface {surface.date.isoformat()}")
    ax.legend()
    _save(fig, path)


def amplitude_frequency(series: SentimentSeries, path: str | Path, max_period: float = 250.0) -> None:
    """Spectral amplitude against period in trading days."""
    periods, amps = fft_amplitudes(series)
    keep = (periods > 0) & (periods <= max_period)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(periods[keep], amps[keep], lw=0.8)
    ax.set_xlabel("period (trading days)")
    ax.set_ylabel("amplitude")
    ax.set_title("amplitude-frequency")
    _save(fig, path)


def imf_stack(imfs: ImfSet, path: str | Path) -> None:
    """Stacked panel of the extracted modes plus the residual."""
    n = len(imfs.imfs) + 1
    fig, axes = plt.subplots(n, 1, figsize=(7, 1.4 * n), sharex=True)
    axes = [axes] if n == 1 else list(axes)
    for i, imf in enumerate(imfs.imfs):
        axes[i].plot(imf, lw=0.7)
        axes[i].set_ylabel(f"imf {i + 1}", fontsize=8)
    axes[-1].plot(imfs.residual, lw=0.7, color="tab:red")
    axes[-1].set_ylabel("residual", fontsize=8)
    axes[-1].set_xlabel("trading day")
    _save(fig, path)


def irf_grid(results: Sequence[IrfResult], responses: Sequence[str], path: str | Path) -> None:
    """Shock-by-response grid of impulse responses.

    Identification and confidence bands are intentionally omitted; the
    footer notes this.
    """
    rows = len(results)
    cols = len(responses)
    fig, axes = plt.subplots(rows, cols, figsize=(2.4 * cols, 2.0 * rows), sharex=True, squeeze=False)
    for i, res in enumerate(results):
        for j, name in enumerate(responses):
            k = res.response_names.index(name)
            ax = axes[i][j]
            ax.plot(res.horizons, res.values[:, k], lw=0.9)
            ax.axhline(0.0, color="gray", lw=0.5)
            if i == 0:
                ax.set_title(name, fontsize=8)
            if j == 0:
                ax.set_ylabel(f"shock {res.shock}", fontsize=8)
    fig.supxlabel("horizon (days); reduced form, no bands")
    fig.tight_layout()
    _save(fig, path)


def smirk_comparison(
    moneyness: Sequence[float],
    realized: Mapping[str, Sequence[float]],
    predicted: Mapping[str, Sequence[float]],
    path: str | Path,
) -> None:
    """Predicted against realized smile values, moneyness on the x axis."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, vals in realized.items():
        ax.plot(moneyness, vals, marker="o", lw=1.2, label=f"realized {label}")
    for label, vals in predicted.items():
        ax.plot(moneyness, vals, marker="x", ls="--", lw=1.0, label=f"predicted {label}")
    ax.set_xlabel("moneyness K/S")
    ax.set_ylabel("implied vol")
    ax.legend(fontsize=7)
    _save(fig, path)

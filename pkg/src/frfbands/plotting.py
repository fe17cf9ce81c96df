"""Figure data and SVG export for band results."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import BandEstimate

__all__ = ["band_table", "histogram_table", "write_csv_tables", "write_svg_figures"]


def band_table(band: BandEstimate) -> tuple[list[str], np.ndarray]:
    cols = ["t", "avg", "lower", "upper", "sigma"]
    return cols, np.column_stack([band.time, band.avg, band.lower, band.upper, band.sigma])


def histogram_table(band: BandEstimate) -> tuple[list[str], np.ndarray]:
    return ["value", "chist"], np.column_stack([band.histogram_values, band.chist])


def _write(path: Path, cols, table) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        writer.writerows([[repr(float(v)) for v in row] for row in table])


def write_csv_tables(band: BandEstimate, prefix: Path, overlay=None) -> list[Path]:
    """``<prefix>_band.csv`` and ``<prefix>_chist.csv`` (plus overlaid PIRs)."""
    prefix = Path(prefix)
    out = [prefix.with_name(prefix.name + "_band.csv"),
           prefix.with_name(prefix.name + "_chist.csv")]
    _write(out[0], *band_table(band))
    _write(out[1], *histogram_table(band))
    if overlay is not None:
        path = prefix.with_name(prefix.name + "_overlay.csv")
        cols = ["t"] + [f"member_{k}" for k in range(overlay.shape[0])]
        _write(path, cols, np.column_stack([band.time, overlay.T]))
        out.append(path)
    return out


def write_svg_figures(band: BandEstimate, prefix: Path, overlay=None) -> list[Path]:
    """Time-domain band figure and cumulative histogram figure as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed metadata keeps the SVG bytes reproducible
    plt.rcParams["svg.hashsalt"] = "frfbands"
    meta = {"Date": None}
    prefix = Path(prefix)
    paths = [prefix.with_name(prefix.name + "_band.svg"),
             prefix.with_name(prefix.name + "_chist.svg")]

    fig, ax = plt.subplots(figsize=(7, 4))
    if overlay is not None:
        ax.plot(band.time, overlay.T, color="0.8", lw=0.6)
    ax.plot(band.time, band.avg, color="k", lw=1.2, label="mean PIR")
    ax.plot(band.time, band.lower, "b:", lw=1.2, label=f"{band.alpha:g}% {band.kind.value} band")
    ax.plot(band.time, band.upper, "b:", lw=1.2)
    if band.kind.value == "confidence":
        ax.axhline(0.0, color="r", lw=0.8)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("PIR")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(paths[0], format="svg", metadata=meta)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 4))
    k = band.histogram_values.shape[0]
    pick = np.unique(np.linspace(0, k - 1, min(k, 2000)).astype(int))
    ax.plot(band.histogram_values[pick], band.chist[pick], color="k", lw=1.0)
    ax.axhline(band.alpha / 100, color="0.5", ls="--", lw=0.8)
    ax.axvline(band.constant, color="r", lw=0.8, label=f"C = {band.constant:.4g}")
    ax.set_xlabel("bootstrap statistic")
    ax.set_ylabel("cumulative fraction")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(paths[1], format="svg", metadata=meta)
    plt.close(fig)
    return paths

"""Turn specmux CSV sweeps into publication-style figures.

Four figure ids are supported:

  freq_response     per-channel mode-mapper frequency response
  hom_dips          coincidence dip traces for every channel pair, with
                    Gaussian fit overlays when a fits CSV is supplied
  phase_inset       dip visibility versus the early/late qubit phase
  rate_enhancement  key-rate enhancement curves (one CSV per scenario)

Rendering is deterministic: fixed style, fixed figure geometry, pinned SVG
hash salt and no embedded timestamps, so identical inputs give byte-identical
SVG output.
"""
from __future__ import annotations

import argparse
import csv
import fnmatch
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotkit"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGURE_IDS = ("freq_response", "hom_dips", "phase_inset", "rate_enhancement")

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


class PlotDataError(Exception):
    """Input CSV missing, empty, malformed, or lacking required columns."""


@dataclass
class FigureSpec:
    """One figure request: which renderer, which CSVs, where to write."""

    figure: str
    inputs: list[Path]
    output: Path
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure!r}; expected "
                             f"one of {', '.join(FIGURE_IDS)}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def load_table(path: Path):
    """(columns, data) from a CSV; raises PlotDataError on any defect."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise PlotDataError(f"{path}: empty file") from None
            rows = [row for row in reader if row]
    except OSError as err:
        raise PlotDataError(f"{path}: {err.strerror}") from None
    if not rows:
        raise PlotDataError(f"{path}: header only, no data rows")
    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as err:
        raise PlotDataError(f"{path}: non-numeric cell ({err})") from None
    if data.shape[1] != len(header):
        raise PlotDataError(f"{path}: ragged rows")
    return header, data


def require_columns(header, names, path):
    missing = [n for n in names if n not in header]
    if missing:
        raise PlotDataError(f"{path}: missing column(s) "
                            + ", ".join(repr(n) for n in missing))
    return [header.index(n) for n in names]


def match_columns(header, pattern, path):
    hits = [n for n in header if fnmatch.fnmatch(n, pattern)]
    if not hits:
        raise PlotDataError(f"{path}: no column matching {pattern!r}")
    return hits


def _render_freq_response(spec, ax):
    header, data = load_table(spec.inputs[0])
    (fcol,) = require_columns(header, ["frequency_hz"], spec.inputs[0])
    freqs = data[:, fcol] / 1e9
    for name in match_columns(header, "transmission_ch*", spec.inputs[0]):
        ax.plot(freqs, data[:, header.index(name)],
                label=name.replace("transmission_", "channel "))
    ax.set_xlabel("detuning (GHz)")
    ax.set_ylabel("transmission")
    ax.set_title("Mode-mapper frequency response")
    ax.legend(loc="upper right")


def _render_hom_dips(spec, ax):
    header, data = load_table(spec.inputs[0])
    (dcol,) = require_columns(header, ["delay_s"], spec.inputs[0])
    delays = data[:, dcol] / 1e-9
    pair_cols = match_columns(header, "*_pair_*", spec.inputs[0])
    for name in pair_cols:
        pair = name.split("_pair_", 1)[1].replace("_", "|")
        ax.plot(delays, data[:, header.index(name)], "o", markersize=3,
                label=f"modes {pair}")
    if len(spec.inputs) > 1:
        fheader, fits = load_table(spec.inputs[1])
        idx = require_columns(
            fheader, ["channel_1", "channel_2", "baseline", "visibility",
                      "center_s", "width_s"], spec.inputs[1])
        grid = np.linspace(delays.min(), delays.max(), 400)
        for row in fits:
            c0, v, t0, w = row[idx[2]], row[idx[3]], row[idx[4]], row[idx[5]]
            curve = c0 * (1.0 - v * np.exp(
                -((grid * 1e-9 - t0) ** 2) / (2.0 * w * w)))
            ax.plot(grid, curve, "-", linewidth=1, color="0.3")
    ax.set_xlabel("relative delay (ns)")
    ax.set_ylabel("coincidences")
    ax.set_title("Two-photon interference dips")
    ax.legend(loc="lower right", fontsize=8)


def _render_phase_inset(spec, ax):
    header, data = load_table(spec.inputs[0])
    tcol, vcol = require_columns(header, ["theta_rad", "visibility"],
                                 spec.inputs[0])
    theta = data[:, tcol]
    vis = data[:, vcol]
    ax.plot(theta / math.pi, vis, "o", markersize=4, label="simulated")
    grid = np.linspace(theta.min(), theta.max(), 400)
    ax.plot(grid / math.pi, vis.max() * 0.5 * (1.0 + np.cos(grid)), "-",
            linewidth=1, label="(1 + cos) / 2 law")
    ax.set_xlabel("qubit phase (pi rad)")
    ax.set_ylabel("dip visibility")
    ax.set_title("Visibility versus qubit phase")
    ax.legend(loc="upper right", fontsize=8)


def _render_rate_enhancement(spec, ax):
    for path in spec.inputs:
        header, data = load_table(path)
        mcol, ecol = require_columns(header, ["modes_used", "enhancement"],
                                     path)
        label = path.stem.replace("keyrate_", "").replace("_", " ")
        ax.plot(data[:, mcol], data[:, ecol], "o-", markersize=3, label=label)
    ax.axhline(1.0, color="0.4", linewidth=1, linestyle="--")
    ax.set_xlabel("multiplexed modes")
    ax.set_ylabel("key-rate enhancement")
    ax.set_title("Multiplexed key-rate enhancement")
    ax.legend(loc="best", fontsize=8)


_RENDERERS = {
    "freq_response": _render_freq_response,
    "hom_dips": _render_hom_dips,
    "phase_inset": _render_phase_inset,
    "rate_enhancement": _render_rate_enhancement,
}


def render(spec: FigureSpec) -> Path:
    """Render the figure and return the output path."""
    style = dict(STYLE)
    style.update(spec.style)
    with plt.rc_context(style):
        fig, ax = plt.subplots()
        try:
            _RENDERERS[spec.figure](spec, ax)
            fig.tight_layout()
            suffix = spec.output.suffix.lower().lstrip(".") or "svg"
            metadata = {"Date": None} if suffix == "svg" else None
            fig.savefig(spec.output, format=suffix, metadata=metadata)
        finally:
            plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a specmux CSV sweep as a figure")
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        type=Path, metavar="CSV")
    parser.add_argument("--out", required=True, type=Path)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(figure=args.figure, inputs=args.inputs,
                          output=args.out))
    except PlotDataError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

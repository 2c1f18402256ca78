"""Render the three comparison figures from sweep CSVs.

Figure kinds:
    se_sweep  - total spectral efficiency versus the power budget
    rate_cdf  - empirical CDF of per-user rates at one power point
    pe_sweep  - power efficiency versus the power budget

Each render writes one raster (.png) and one vector (.svg) file. Output is
deterministic for fixed inputs: no timestamps are embedded.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_samples, read_sweep, se_crossing

LEGEND_NAMES = {
    "conventional": "Conventional 3 Color",
    "coordinated": "Coordinated",
    "cooperative": "Cooperative (bound)",
    "cognitive_nopc": "Cognitive (w/o power control)",
    "cognitive_pc": "Cognitive (w/ power control)",
}
LEGEND_ORDER = ("conventional", "coordinated", "cooperative",
                "cognitive_nopc", "cognitive_pc")
STYLES = {
    "conventional": dict(color="tab:gray", marker="s"),
    "coordinated": dict(color="tab:blue", marker="o"),
    "cooperative": dict(color="black", linestyle="--"),
    "cognitive_nopc": dict(color="tab:green", marker="^"),
    "cognitive_pc": dict(color="tab:red", marker="v"),
}

KINDS = ("se_sweep", "rate_cdf", "pe_sweep")


@dataclass
class PlotSpec:
    kind: str
    csv_path: str
    out_path: str
    cdf_power_dbw: float | None = None
    crossing_pair: tuple[str, str] | None = None
    title: str | None = None


def _ordered_archs(rows):
    present = {r["architecture"] for r in rows}
    ordered = [a for a in LEGEND_ORDER if a in present]
    ordered += sorted(present - set(LEGEND_ORDER))
    return ordered


def _label(arch):
    return LEGEND_NAMES.get(arch, arch)


def _sweep_axes(rows, column, ylabel, ax):
    for arch in _ordered_archs(rows):
        pts = sorted((r["p_tot_dbw"], r[column]) for r in rows
                     if r["architecture"] == arch)
        x, y = zip(*pts)
        ax.plot(x, y, label=_label(arch), markersize=4,
                **STYLES.get(arch, {}))
    ax.set_xlabel("Total power budget $P_{tot}$ [dBW]")
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)


def render(spec: PlotSpec) -> list[str]:
    """Render one figure; returns the written file paths."""
    if spec.kind not in KINDS:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    try:
        if spec.kind == "se_sweep":
            rows = read_sweep(spec.csv_path)
            _sweep_axes(rows, "se_mean", "Spectral efficiency [bits/s/Hz]", ax)
            if spec.crossing_pair:
                x = se_crossing(rows, *spec.crossing_pair)
                if x is not None:
                    ax.axvline(x, color="k", linewidth=0.8, linestyle=":")
                    ax.annotate(f"crossing {x:.1f} dBW", xy=(x, ax.get_ylim()[1] * 0.05),
                                rotation=90, va="bottom", ha="right", fontsize=8)
            ax.set_title(spec.title or "Spectral efficiency vs power budget")
        elif spec.kind == "pe_sweep":
            rows = read_sweep(spec.csv_path)
            _sweep_axes(rows, "pe_mean", "Power efficiency [bits/s/Hz/W]", ax)
            ax.set_yscale("log")
            ax.set_title(spec.title or "Power efficiency vs power budget")
        else:  # rate_cdf
            rows = read_samples(spec.csv_path)
            powers = sorted({r["p_tot_dbw"] for r in rows})
            power = spec.cdf_power_dbw if spec.cdf_power_dbw is not None else powers[0]
            sel = [r for r in rows if abs(r["p_tot_dbw"] - power) < 1e-9]
            if not sel:
                raise SchemaError(
                    f"no samples at {power} dBW (available: {powers})")
            for arch in _ordered_archs(sel):
                rates = np.sort([r["rate"] for r in sel
                                 if r["architecture"] == arch])
                cdf = np.arange(1, len(rates) + 1) / len(rates)
                ax.step(rates, cdf, where="post", label=_label(arch),
                        color=STYLES.get(arch, {}).get("color"))
            ax.set_xlabel("Per-user rate [bits/s/Hz]")
            ax.set_ylabel("CDF")
            ax.set_ylim(0.0, 1.02)
            ax.grid(True, alpha=0.3)
            ax.legend(fontsize=8, loc="lower right")
            ax.set_title(spec.title or f"Per-user rate distribution at {power:g} dBW")
        paths = _save(fig, spec.out_path)
    finally:
        plt.close(fig)
    return paths


def _save(fig, out_path: str) -> list[str]:
    root, ext = os.path.splitext(out_path)
    raster = root + (ext if ext.lower() == ".png" else ".png")
    vector = root + ".svg"
    os.makedirs(os.path.dirname(os.path.abspath(raster)), exist_ok=True)
    fig.savefig(raster, dpi=150, metadata={"Software": "dualsat-figplots"})
    # a fixed hash salt and stripped date keep the vector output reproducible
    matplotlib.rcParams["svg.hashsalt"] = "dualsat-figplots"
    fig.savefig(vector, metadata={"Date": None})
    return [raster, vector]

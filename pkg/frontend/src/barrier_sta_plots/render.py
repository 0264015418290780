"""Figure builders for trajectory CSVs.

Five figure kinds: the sliding variable with dashed accuracy-threshold
lines, the control signal with a zoom inset, the gain/mode timelines, the
perturbation and its rate, and a stacked single-/double-layer comparison.
Matplotlib runs on the Agg backend; rendering reads the CSVs and writes
one image file, never touching the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import TrajectoryTable, read_trajectory

KINDS = ("sliding", "control", "gains", "perturbation", "compare")

#: Dashed threshold lines: innermost black, outer ones green.
_INNER_COLOR = "black"
_OUTER_COLOR = "tab:green"


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple
    kind: str
    out_path: Path
    eps_lines: tuple = ()
    log_scale: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        expected = 2 if self.kind == "compare" else 1
        if len(self.csv_paths) != expected:
            raise ValueError(
                f"kind {self.kind!r} needs exactly {expected} csv input(s), "
                f"got {len(self.csv_paths)}"
            )
        object.__setattr__(self, "csv_paths", tuple(Path(p) for p in self.csv_paths))
        object.__setattr__(self, "out_path", Path(self.out_path))
        object.__setattr__(self, "eps_lines", tuple(sorted(float(e) for e in self.eps_lines)))


def _draw_threshold_lines(ax, eps_lines):
    for i, eps in enumerate(eps_lines):
        color = _INNER_COLOR if i == 0 else _OUTER_COLOR
        ax.axhline(eps, linestyle="--", linewidth=1.0, color=color)
        ax.axhline(-eps, linestyle="--", linewidth=1.0, color=color)


def _sliding_panel(ax, table: TrajectoryTable, eps_lines, log_scale: bool, label=None):
    if log_scale:
        # magnitude on a log axis; thresholds become single lines
        ax.semilogy(table.t, np.maximum(np.abs(table.s), 1e-300), linewidth=0.9,
                    label=label)
        for i, eps in enumerate(eps_lines):
            ax.axhline(eps, linestyle="--", linewidth=1.0,
                       color=_INNER_COLOR if i == 0 else _OUTER_COLOR)
        ax.set_ylabel("|s|")
    else:
        ax.plot(table.t, table.s, linewidth=0.9, label=label)
        _draw_threshold_lines(ax, eps_lines)
        ax.set_ylabel("s")
    ax.set_xlabel("t [s]")


def _control_panel(fig, ax, table: TrajectoryTable):
    ax.plot(table.t, table.u, linewidth=0.9)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("u")
    # zoom inset centered on the strongest late-phase control activity
    span = table.t[-1] - table.t[0]
    if span > 0 and len(table) > 10:
        half = len(table) // 2
        idx = half + int(np.argmax(np.abs(table.u[half:])))
        width = max(0.02 * span, 10 * (table.t[1] - table.t[0]))
        lo = max(table.t[0], table.t[idx] - width / 2)
        hi = min(table.t[-1], lo + width)
        mask = (table.t >= lo) & (table.t <= hi)
        inset = ax.inset_axes([0.58, 0.58, 0.38, 0.34])
        inset.plot(table.t[mask], table.u[mask], linewidth=0.9)
        inset.set_title(f"zoom [{lo:.2f}, {hi:.2f}] s", fontsize=7)
        inset.tick_params(labelsize=6)


def _gains_panel(ax, table: TrajectoryTable):
    ax.plot(table.t, table.k1, linewidth=0.9, label="k1")
    ax.plot(table.t, table.k2, linewidth=0.9, label="k2")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("gain")
    ax.legend(loc="upper right", fontsize=8)
    band = ax.twinx()
    band.step(table.t, table.mode, where="post", color="0.4", linewidth=0.7, alpha=0.6)
    band.set_ylabel("mode")
    band.set_yticks(sorted(set(int(m) for m in table.mode)))


def _perturbation_panels(axes, table: TrajectoryTable):
    ax_d, ax_rate = axes
    ax_d.plot(table.t, table.d, linewidth=0.9)
    ax_d.set_ylabel("d")
    # NaNs (undefined rate on step edges) break the line into gaps
    ax_rate.plot(table.t, table.delta, linewidth=0.9)
    ax_rate.set_ylabel("rate of d")
    ax_rate.set_xlabel("t [s]")


def build_figure(spec: PlotSpec):
    """Build (but do not save) the figure for a plot spec."""
    tables = [read_trajectory(p) for p in spec.csv_paths]

    if spec.kind == "compare":
        fig, axes = plt.subplots(2, 1, figsize=(7.5, 5.4), sharex=True)
        for ax, table, label in zip(axes, tables, ("input 1", "input 2")):
            _sliding_panel(ax, table, spec.eps_lines, spec.log_scale)
            ax.set_title(f"{label}: {table.path.name}", fontsize=9)
        fig.tight_layout()
        return fig

    table = tables[0]
    if spec.kind == "perturbation":
        fig, axes = plt.subplots(2, 1, figsize=(7.5, 5.0), sharex=True)
        _perturbation_panels(axes, table)
        fig.tight_layout()
        return fig

    fig, ax = plt.subplots(figsize=(7.5, 3.4))
    if spec.kind == "sliding":
        _sliding_panel(ax, table, spec.eps_lines, spec.log_scale)
    elif spec.kind == "control":
        _control_panel(fig, ax, table)
    elif spec.kind == "gains":
        _gains_panel(ax, table)
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> Path:
    """Render a plot spec to its output file and return the path."""
    fig = build_figure(spec)
    try:
        spec.out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out_path, dpi=130)
    finally:
        plt.close(fig)
    return spec.out_path

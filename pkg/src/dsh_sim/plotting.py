"""SVG figures of speed traces. Output is byte-stable for identical input."""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .engine import RunResult, SimTrace
from .scenario import Mode

_RC = {"svg.hashsalt": "dsh-sim", "svg.fonttype": "path"}
_TITLES = {Mode.NO_DSH: "No DSH", Mode.STEP: "Step DSH",
           Mode.SINGLE_SIGMOID: "Single-Sigmoid DSH", Mode.STEP_SIGMOID: "Step-Sigmoid DSH"}


def _draw(ax, trace: SimTrace, speed_limit: float, title: str) -> None:
    ax.plot(trace.t, trace.v_ref, color="tab:blue", lw=1.2, label="reference speed")
    ax.plot(trace.t, trace.speed, color="tab:red", lw=1.0, label="vehicle speed")
    ax.axhline(speed_limit, color="black", ls="--", lw=0.8, label="speed limit")
    # the no-DSH driver ignores the broadcast, so only latched runs get the marker
    if trace.session is not None:
        ax.axvline(trace.t[trace.latch_index], color="tab:green", ls=":", lw=1.0,
                   label="advisory received")
    ax.set_title(title, fontsize=10)
    ax.set_ylabel("speed [m/s]")
    ax.grid(True, lw=0.3)


def _save(fig: Figure, path: str | Path) -> None:
    with matplotlib.rc_context(_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})


def trace_figure(trace: SimTrace, speed_limit: float, mode: Mode) -> Figure:
    fig = Figure(figsize=(8, 4))
    ax = fig.add_subplot()
    _draw(ax, trace, speed_limit, _TITLES[mode])
    ax.set_xlabel("time [s]")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    return fig


def comparison_figure(results: dict[Mode, RunResult], speed_limit: float) -> Figure:
    """One panel per mode, stacked, all on shared axes ranges."""
    fig = Figure(figsize=(8, 2.4 * len(results)))
    axes = fig.subplots(len(results), 1, sharex=True, sharey=True, squeeze=False)[:, 0]
    for ax, (mode, result) in zip(axes, results.items()):
        _draw(ax, result.trace, speed_limit, _TITLES[mode])
    axes[-1].set_xlabel("time [s]")
    axes[0].legend(loc="lower left", fontsize=7)
    fig.tight_layout()
    return fig


def save_trace_svg(trace: SimTrace, speed_limit: float, mode: Mode, path: str | Path) -> None:
    _save(trace_figure(trace, speed_limit, mode), path)


def save_comparison_svg(results: dict[Mode, RunResult], speed_limit: float,
                        path: str | Path) -> None:
    _save(comparison_figure(results, speed_limit), path)

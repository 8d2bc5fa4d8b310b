"""Figure rendering for the command-line report path.

CSV stays the machine-readable contract; these helpers render the same
data to image files when a plot path is requested. matplotlib is imported
lazily so the numeric paths never depend on it.
"""

from __future__ import annotations

import numpy as np

from .collision import CollisionTrace, HeatmapResult


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_heatmap(result: HeatmapResult, path: str) -> None:
    """Render a visibility heat map over the (T0, T1) grid to an image file."""
    plt = _axes()
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    t = result.temperatures
    mesh = ax.pcolormesh(t, t, result.values.T, vmin=0.0, vmax=1.0, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="visibility")
    ax.set_xlabel(r"$T_0$")
    ax.set_ylabel(r"$T_1$")
    ax.set_title(f"{result.scenario}, eta={result.eta:g}, M={result.m}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_curve(trace: CollisionTrace, path: str) -> None:
    """Render a per-collision curve (distance or visibility) to an image file."""
    plt = _axes()
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    if trace.trace_distance is not None:
        y, label = trace.trace_distance, "trace distance to thermal state"
        ax.set_yscale("log" if np.all(y > 0) else "linear")
    else:
        y, label = trace.visibility, "visibility"
    ax.plot(trace.collisions, y, marker="o")
    ax.set_xlabel("collision number")
    ax.set_ylabel(label)
    ax.set_xticks(trace.collisions)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Figure rendering for the report paths of the CLI commands.

Every function writes a PNG next to the delimited output it visualizes.
The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_FRONT_STYLE = dict(s=14, color="tab:blue", zorder=3)


def plot_front(points: np.ndarray, selected: int | None, path: Path,
               title: str = "Pareto front") -> None:
    """Scatter of the objective pairs with the selected point highlighted."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.scatter(points[:, 0], points[:, 1], label="front", **_FRONT_STYLE)
    if selected is not None and 0 <= selected < len(points):
        ax.scatter([points[selected, 0]], [points[selected, 1]],
                   s=70, marker="*", color="tab:red", zorder=4, label="selected")
    ax.set_xlabel("operating time $f_1$ (s)")
    ax.set_ylabel("normalized effort $f_2$")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _limit_lines(ax, limit: float) -> None:
    ax.axhline(limit, color="tab:red", ls="--", lw=0.8)
    ax.axhline(-limit, color="tab:red", ls="--", lw=0.8)


def plot_trolley_trajectory(cols: dict[str, np.ndarray], limits, path: Path) -> None:
    """Actuated motion and radial swings of a planned trolley move."""
    t = cols["t"]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    ax = axes[0, 0]
    ax.plot(t, cols["d_T"], color="tab:blue")
    ax.set_ylabel("position (m)")
    ax = axes[0, 1]
    ax.plot(t, cols["d_T_vel"], color="tab:blue", label="velocity")
    ax.plot(t, cols["d_T_acc"], color="tab:orange", label="acceleration")
    _limit_lines(ax, limits.trolley_vel)
    ax.set_ylabel("vel (m/s), acc (m/s$^2$)")
    ax.legend(fontsize=8)
    ax = axes[1, 0]
    ax.plot(t, np.degrees(cols["alpha_h"]), label=r"$\alpha_h$")
    ax.plot(t, np.degrees(cols["alpha_l"]), label=r"$\alpha_l$")
    _limit_lines(ax, math.degrees(limits.alpha_h))
    ax.set_ylabel("swing (deg)")
    ax.set_xlabel("time (s)")
    ax.legend(fontsize=8)
    ax = axes[1, 1]
    ax.plot(t, np.degrees(cols["alpha_h_vel"]), label=r"$\dot\alpha_h$")
    ax.plot(t, np.degrees(cols["alpha_l_vel"]), label=r"$\dot\alpha_l$")
    ax.set_ylabel("swing rate (deg/s)")
    ax.set_xlabel("time (s)")
    ax.legend(fontsize=8)
    for a in axes.flat:
        a.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_slew_trajectory(cols: dict[str, np.ndarray], limits, path: Path) -> None:
    """Jib motion and the four swing angles of a planned slew move."""
    t = cols["t"]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)
    ax = axes[0, 0]
    ax.plot(t, np.degrees(cols["theta_S"]), color="tab:blue")
    ax.set_ylabel("jib angle (deg)")
    ax = axes[0, 1]
    ax.plot(t, np.degrees(cols["theta_S_vel"]), label="velocity")
    ax.plot(t, np.degrees(cols["theta_S_acc"]), label="acceleration")
    _limit_lines(ax, math.degrees(limits.slew_vel))
    ax.set_ylabel("rate (deg/s, deg/s$^2$)")
    ax.legend(fontsize=8)
    ax = axes[1, 0]
    ax.plot(t, np.degrees(cols["alpha_h"]), label=r"$\alpha_h$")
    ax.plot(t, np.degrees(cols["alpha_l"]), label=r"$\alpha_l$")
    _limit_lines(ax, math.degrees(limits.alpha_h))
    ax.set_ylabel("radial swing (deg)")
    ax.set_xlabel("time (s)")
    ax.legend(fontsize=8)
    ax = axes[1, 1]
    ax.plot(t, np.degrees(cols["beta_h"]), label=r"$\beta_h$")
    ax.plot(t, np.degrees(cols["beta_l"]), label=r"$\beta_l$")
    _limit_lines(ax, math.degrees(limits.beta_h))
    ax.set_ylabel("tangential swing (deg)")
    ax.set_xlabel("time (s)")
    ax.legend(fontsize=8)
    for a in axes.flat:
        a.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_compare_box(metric_values: dict[str, dict[str, list[float]]], path: Path,
                     title: str = "") -> None:
    """Side-by-side boxplots per metric for the compared algorithms."""
    metrics = list(metric_values.keys())
    fig, axes = plt.subplots(1, len(metrics), figsize=(3.2 * len(metrics), 3.6))
    if len(metrics) == 1:
        axes = [axes]
    for ax, metric in zip(axes, metrics):
        per_algo = metric_values[metric]
        labels = list(per_algo.keys())
        ax.boxplot([per_algo[a] for a in labels], tick_labels=labels, whis=(0, 100))
        ax.set_title(metric)
        ax.grid(alpha=0.3, axis="y")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(t: np.ndarray, f2: np.ndarray, feasible: np.ndarray, path: Path) -> None:
    """Effort objective over the sweep grid, feasible segment highlighted."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(t, f2, color="0.7", lw=1, label="all times")
    ax.plot(t[feasible], f2[feasible], color="tab:blue", lw=2, label="feasible")
    ax.set_xlabel("operating time (s)")
    ax.set_ylabel("normalized effort $f_2$")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

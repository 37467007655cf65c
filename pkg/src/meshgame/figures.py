"""Matplotlib figures for comparison reports.

Rendered with the Agg backend straight to files; no display required.
Colors follow the wireframe overlays: equilibrium blue, best red, uniform
black.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .svg import BEST_COLOR, INITIAL_COLOR, NASH_COLOR


def plot_quality_vs_k(records: list[dict], path, scenario: str = "") -> None:
    """Mean quality of equilibrium, best, and uniform profiles against k.

    records: one dict per k with keys 'k', 'nash', 'best', 'uniform', each
    family a dict holding 'mean_quality' (a family may be absent when the
    sweep skipped it).
    """
    ks = [r["k"] for r in records]
    fig, ax = plt.subplots(figsize=(6, 4))
    for family, color, marker in (
        ("nash", NASH_COLOR, "o"),
        ("best", BEST_COLOR, "s"),
        ("uniform", INITIAL_COLOR, "^"),
    ):
        ys = [r[family]["mean_quality"] if r.get(family) else None for r in records]
        pairs = [(k, y) for k, y in zip(ks, ys) if y is not None]
        if pairs:
            ax.plot(*zip(*pairs), color=color, marker=marker, label=family)
    ax.set_xlabel("k (maximum transform power)")
    ax.set_ylabel("mean element quality")
    title = "mean quality vs k"
    if scenario:
        title = f"{scenario}: {title}"
    ax.set_title(title)
    ax.set_xticks(ks)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_quality_vs_iterations(trajectories: dict[int, list[float]], path, scenario: str = "") -> None:
    """Mean quality along iterated smoothing runs, one line per k."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for k in sorted(trajectories):
        values = trajectories[k]
        ax.plot(range(len(values)), values, marker="o", label=f"k={k}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean element quality")
    title = "mean quality vs iterations"
    if scenario:
        title = f"{scenario}: {title}"
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_min_quality_distribution(nash_minima, best_minima, path, title: str = "") -> None:
    """Scatter of per-instance minimum qualities, equilibrium vs best."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(best_minima, nash_minima, s=18, color=NASH_COLOR, alpha=0.8)
    lo = min(min(best_minima), min(nash_minima))
    hi = max(max(best_minima), max(nash_minima))
    pad = 0.02 * (hi - lo + 1e-12)
    ax.plot([lo - pad, hi + pad], [lo - pad, hi + pad], color="gray", lw=1, ls="--")
    ax.set_xlabel("min quality, best profile")
    ax.set_ylabel("min quality, equilibrium")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

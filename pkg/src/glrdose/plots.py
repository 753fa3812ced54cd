"""Matplotlib rendering of report tables to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reports import OutputTable

__all__ = ["save_log_glr_curves", "save_scenario_sample", "save_study_metrics"]


def save_log_glr_curves(table: OutputTable, path: str, phi: float = 0.25) -> None:
    p_hat = [row[0] for row in table.rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for col, name in enumerate(table.headers[1:], start=1):
        ax.plot(p_hat, [row[col] for row in table.rows], label=name.replace("log_glr_", "n = "))
    ax.axhline(0.0, linestyle=":", color="gray")
    ax.axvline(phi, linestyle=":", color="gray")
    ax.set_xlabel("observed DLT rate")
    ax.set_ylabel("log likelihood ratio")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scenario_sample(table: OutputTable, path: str, phi: float = 0.25) -> None:
    by_set: dict[int, list[tuple[int, float]]] = {}
    for set_id, dose, rate in table.rows:
        by_set.setdefault(set_id, []).append((dose, rate))
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for set_id, points in sorted(by_set.items()):
        points.sort()
        ax.plot([d for d, _ in points], [r for _, r in points], marker="o", alpha=0.7)
    ax.axhline(phi, color="black")
    ax.set_xlabel("dose level")
    ax.set_ylabel("true DLT rate")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_study_metrics(table: OutputTable, path: str) -> None:
    """Grouped bars of the over-treatment share per design, one panel per
    (dose count, target) scenario."""
    idx = {name: i for i, name in enumerate(table.headers)}
    scenarios: dict[tuple, list[tuple[str, float]]] = {}
    for row in table.rows:
        key = (row[idx["D"]], row[idx["phi"]])
        label = row[idx["design"]]
        if row[idx["k1"]]:
            label += f" {row[idx['k1']]}/{row[idx['k2']]}"
        scenarios.setdefault(key, []).append((label, float(row[idx["pct_ot"]])))
    n_panels = len(scenarios)
    ncols = min(3, n_panels)
    nrows = (n_panels + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows), squeeze=False
    )
    for ax in axes.flat[n_panels:]:
        ax.set_visible(False)
    for ax, (key, cells) in zip(axes.flat, sorted(scenarios.items())):
        labels = [c[0] for c in cells]
        values = [c[1] for c in cells]
        ax.bar(range(len(cells)), values)
        ax.set_xticks(range(len(cells)))
        ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
        ax.set_title(f"D={key[0]}, target={key[1]}", fontsize=9)
        ax.set_ylabel("% over-treated")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

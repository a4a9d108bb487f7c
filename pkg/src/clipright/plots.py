"""Figure rendering for the CLI report paths.

matplotlib is imported lazily with the Agg backend so plain (plot-free) CLI
runs never touch it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

LABEL_COLORS = {
    "fair_use": "#2ca02c",
    "not_fair_use": "#d62728",
    "probably_not_fair_use": "#1f77b4",
    "uncontested": "#9e9e9e",
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_histogram(
    bin_edges: Sequence[float],
    counts_by_label: dict[str, Sequence[int]],
    path: str | Path,
) -> None:
    """Per-label metric histogram written to an image file."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = bin_edges[1] - bin_edges[0] if len(bin_edges) > 1 else 0.05
    lefts = list(bin_edges[:-1])
    bottoms = [0.0] * len(lefts)
    for label, counts in counts_by_label.items():
        ax.bar(
            lefts,
            counts,
            width=width,
            bottom=bottoms,
            align="edge",
            label=label,
            color=LABEL_COLORS.get(label),
            edgecolor="white",
            linewidth=0.4,
        )
        bottoms = [b + c for b, c in zip(bottoms, counts)]
    ax.set_xlabel("similarity metric")
    ax.set_ylabel("pair count")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_payouts(
    holder_order: Sequence[str],
    rows: Sequence[tuple[str, dict[str, int]]],
    path: str | Path,
) -> None:
    """Grouped bar chart of whole-dollar payouts, one group per holder.

    ``rows`` pairs a scheme label with {holder_id: dollars}. A log scale
    keeps the small and the 10^4-scale payouts readable together.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    n_rows = max(len(rows), 1)
    group_width = 0.8
    bar_width = group_width / n_rows
    for k, (scheme_label, payouts) in enumerate(rows):
        xs = [i - group_width / 2 + (k + 0.5) * bar_width for i in range(len(holder_order))]
        ax.bar(xs, [payouts.get(h, 0) for h in holder_order], width=bar_width,
               label=scheme_label)
    ax.set_xticks(range(len(holder_order)))
    ax.set_xticklabels(holder_order, rotation=20, ha="right")
    ax.set_ylabel("USD per year")
    ax.set_yscale("symlog")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

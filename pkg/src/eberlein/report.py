"""Figure rendering for the CLI report path.

Renders the convergence curves (off-norms and commutator norm per step, log
scale) and log-magnitude heatmaps of iterate snapshots next to the CSV
artifacts.  Uses the Agg backend; nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .diagnostics import logabs_grid


def render_convergence(trace, destination) -> None:
    """off(A), off(B) and ||C(A)||_F against the step counter, log scale."""
    ks = [r.k for r in trace]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    floor = 1e-18
    ax.semilogy(ks, [max(r.off_A, floor) for r in trace], label="off(A)")
    ax.semilogy(ks, [max(r.off_B, floor) for r in trace], label="off(B)")
    ax.semilogy(ks, [max(r.norm_C, floor) for r in trace], label="||C(A)||_F")
    ax.set_xlabel("iteration")
    ax.set_ylabel("magnitude")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(destination, dpi=120, metadata={"Software": None})
    plt.close(fig)


def render_logabs(A, destination, floor: float = 1e-16, title: str | None = None) -> None:
    """Heatmap of log10 |a_ij|; lighter squares are larger entries."""
    G = logabs_grid(np.asarray(A), floor)
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(G, cmap="viridis")
    fig.colorbar(im, ax=ax, label="log10 |a_ij|")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(destination, dpi=120, metadata={"Software": None})
    plt.close(fig)

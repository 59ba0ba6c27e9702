"""Figures for reports: probability tables, Rényi profiles, cooling diagnostics."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .exact import apply_permutation, tensor_all, uniform  # noqa: E402


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_classical_tables(cert, path) -> Path:
    """Heatmaps of the joint system/catalyst table before and after the permutation."""
    parts = [cert.state] + ([uniform(cert.ancilla_dim)] if cert.ancilla_dim > 1 else []) + [cert.catalyst]
    before = tensor_all(*parts)
    after = apply_permutation(cert.dynamics, before)
    rows = cert.state.dimension
    fig, axes = plt.subplots(1, 2, figsize=(7, 3.2))
    for ax, table, title in zip(axes, (before, after), ("initial", "final")):
        grid = np.array([float(v) for v in table.entries]).reshape(rows, -1)
        im = ax.imshow(grid, cmap="Blues", vmin=0)
        if grid.size <= 64:
            for (i, j), v in np.ndenumerate(grid):
                ax.text(j, i, f"{table.entries[i * grid.shape[1] + j]}", ha="center", va="center", fontsize=8)
        ax.set_title(title)
        ax.set_xlabel("catalyst index")
        ax.set_ylabel("system index")
        fig.colorbar(im, ax=ax, shrink=0.8)
    return _save(fig, path)


def plot_renyi_rows(rows, path, labels=("before", "after")) -> Path:
    finite = [r for r in rows if math.isfinite(r["alpha"])]
    alphas = [r["alpha"] for r in finite]
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    for key, label, marker in (("before", labels[0], "o"), ("after", labels[1], "s")):
        ys = [r[key] if math.isfinite(r[key]) else np.nan for r in finite]
        ax.plot(alphas, ys, marker=marker, label=label)
    bad = [r["alpha"] for r in finite if r["sign"] < 0]
    for a in bad:
        ax.axvline(a, color="red", alpha=0.3)
    ax.set_xlabel("alpha")
    ax.set_ylabel("Rényi entropy (nats)")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save(fig, path)


def plot_cooling(report, path) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.4))
    ns = [2 * (j + 1) for j in range(len(report.lambda_ratio))]
    axes[0].semilogy(ns, report.lambda_ratio, "o-")
    axes[0].set_xlabel("qubits n")
    axes[0].set_ylabel("λmin(target) / λmin(output)")
    axes[0].grid(alpha=0.3)
    mi = np.array(report.mutual_information_pairs)
    im = axes[1].imshow(mi, cmap="viridis")
    axes[1].set_title("pair mutual information (bits)")
    fig.colorbar(im, ax=axes[1], shrink=0.8)
    return _save(fig, path)

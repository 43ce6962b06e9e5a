"""Figures written next to CLI reports.  Headless: always the Agg backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

VERDICT_COLORS = {
    "FULL_RANK": "tab:green",
    "ROWS_INDEPENDENT": "tab:green",
    "FAILS_BY_COUNTING": "tab:red",
    "NOT_FULL_RANK_CERTIFIED": "tab:red",
    "UNDETERMINED": "tab:gray",
}


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_scan(verdicts: list[dict], path, title: str | None = None) -> None:
    """Row count, column count and rank per shape on a log scale, bars coloured by verdict."""
    labels = [v["shape"] for v in verdicts]
    x = np.arange(len(labels))
    h = np.array([v["h_count"] for v in verdicts], dtype=float)
    vc = np.array([v["v_count"] for v in verdicts], dtype=float)
    rank = np.array([v["rank_report"]["rank"] if v["rank_report"] else np.nan
                     for v in verdicts], dtype=float)
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(labels) + 2), 4))
    ax.bar(x - 0.2, h, width=0.4, label="|H| (rows)", color="tab:blue", alpha=0.6)
    ax.bar(x + 0.2, vc, width=0.4, label="|V| (cols)", color="tab:orange", alpha=0.6)
    colors = [VERDICT_COLORS.get(v["verdict"], "k") for v in verdicts]
    ax.scatter(x, rank, marker="D", c=colors, zorder=3, label="rank")
    ax.set_yscale("log")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("size")
    ax.set_title(title or "rank of K per shape")
    ax.legend(fontsize=8)
    _save(fig, path)


def plot_matrix(dense: np.ndarray, path, title: str | None = None) -> None:
    """Spy plot of a 0/1 matrix."""
    fig, ax = plt.subplots(figsize=(6, 6 * min(2.0, max(0.25, dense.shape[0] / max(1, dense.shape[1])))))
    ax.imshow(dense, cmap="Greys", interpolation="nearest", aspect="auto")
    ax.set_xlabel(f"vertical tableaux ({dense.shape[1]})")
    ax.set_ylabel(f"horizontal tableaux ({dense.shape[0]})")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_proof_summary(summary: dict[str, dict[str, int]], path, title: str | None = None) -> None:
    names = list(summary)
    checked = [summary[k]["checked"] for k in names]
    passed = [summary[k]["passed"] for k in names]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    y = np.arange(len(names))
    ax.barh(y, checked, color="tab:red", alpha=0.4, label="checked")
    ax.barh(y, passed, color="tab:green", label="passed")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    _save(fig, path)

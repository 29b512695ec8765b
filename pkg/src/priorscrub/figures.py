"""Figure rendering for the evaluation report paths.

Figures are written next to the structured output when a figures
directory is requested; everything stays headless (Agg backend).
"""

from __future__ import annotations

import os


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def f1_figures(report: dict, out_dir: str) -> list[str]:
    """Histogram of per-report F1 plus a micro/macro summary bar."""
    plt = _plt()
    os.makedirs(out_dir, exist_ok=True)
    written = []

    values = [r["f1"] for r in report["reports"]]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=20, range=(0.0, 1.0), color="#4363d8", edgecolor="white")
    ax.set_xlabel("per-report F1")
    ax.set_ylabel("reports")
    ax.set_title("Removal F1 distribution (n=%d)" % len(values))
    path = os.path.join(out_dir, "f1_distribution.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(4, 4))
    ax.bar(["micro", "macro"], [report["micro"]["f1"], report["macro_f1"]], color=["#3cb44b", "#f58231"])
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("F1")
    ax.set_title("Aggregate removal F1")
    for i, v in enumerate([report["micro"]["f1"], report["macro_f1"]]):
        ax.text(i, v + 0.02, "%.3f" % v, ha="center")
    path = os.path.join(out_dir, "f1_summary.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written


def metric_figures(result: dict, out_dir: str) -> list[str]:
    """Mean bars and per-pair distributions for the semantic metrics."""
    plt = _plt()
    os.makedirs(out_dir, exist_ok=True)
    written = []
    keys = ["embed_f1", "semb", "entity_f1"]
    labels = ["embed F1", "s_emb", "entity F1"]

    means = [result["means"][k] for k in keys]
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [i for i, m in enumerate(means) if m is not None]
    ax.bar(
        [labels[i] for i in xs],
        [means[i] for i in xs],
        color=["#4363d8", "#3cb44b", "#f58231"][: len(xs)],
    )
    ax.set_ylabel("mean score")
    ax.set_title("Semantic metric means")
    path = os.path.join(out_dir, "metric_means.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for ax, key, label in zip(axes, keys, labels):
        values = [r[key] for r in result["rows"] if r[key] is not None]
        if values:
            ax.hist(values, bins=15, color="#911eb4", edgecolor="white")
        ax.set_title(label)
        ax.set_xlabel("score")
    axes[0].set_ylabel("pairs")
    path = os.path.join(out_dir, "metric_distributions.png")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written

"""CSV and figure output for evaluation runs."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .evaluate import EvalReport  # noqa: E402


def write_eval_csv(report: EvalReport, path) -> Path:
    """One row per fold plus a summary row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "algorithm", "fold", "accuracy",
                         "train_ms", "classify_ms", "flags"])
        for i, acc in enumerate(report.fold_accuracies):
            writer.writerow(["fold", report.algorithm, i, f"{acc:.6f}", "", "", ""])
        writer.writerow(["summary", report.algorithm, report.fold_count,
                         f"{report.accuracy:.6f}", f"{report.train_ms:.3f}",
                         f"{report.classify_ms:.3f}", ";".join(report.flags)])
    return path


def write_curves_csv(rows: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["axis", "grid_value", "accuracy", "stderr"])
        writer.writeheader()
        writer.writerows(rows)
    return path


def plot_confusion(report: EvalReport, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = len(report.class_names)
    fig, ax = plt.subplots(figsize=(max(6, n * 0.3), max(5, n * 0.3)))
    im = ax.imshow(report.confusion, cmap="Blues")
    ax.set_xticks(range(n), report.class_names, rotation=90, fontsize=6)
    ax.set_yticks(range(n), report.class_names, fontsize=6)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    ax.set_title(f"{report.algorithm}: accuracy {report.accuracy:.1%}")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_curves(rows: list[dict], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    axes_kinds = sorted({r["axis"] for r in rows})
    fig, axs = plt.subplots(1, max(len(axes_kinds), 1),
                            figsize=(5 * max(len(axes_kinds), 1), 4), squeeze=False)
    for ax, kind in zip(axs[0], axes_kinds):
        pts = sorted((r for r in rows if r["axis"] == kind), key=lambda r: r["grid_value"])
        x = [r["grid_value"] for r in pts]
        y = [100 * r["accuracy"] for r in pts]
        err = [100 * r["stderr"] for r in pts]
        ax.errorbar(x, y, yerr=err, marker="o")
        ax.set_xlabel(kind.replace("_", " "))
        ax.set_ylabel("accuracy (%)")
        ax.set_ylim(0, 100)
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path

"""Figures for solve reports: largest solution degree per unknown against the claimed bounds."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _numeric(d) -> float | None:
    # minus-infinity sits below zero, not-polynomial has no height
    if isinstance(d, int):
        return float(d)
    return -0.5 if d == "minus-infinity" else None


def degree_figure(report: dict, path: str | Path) -> Path:
    """Bar chart of each unknown's maximal degree with one dashed line per claim."""
    path = Path(path)
    rows = report["degrees"]
    names = [r["unknown"] for r in rows]
    heights = [_numeric(r["max"]) for r in rows]
    fig, ax = plt.subplots(figsize=(max(3.5, 0.9 * len(names) + 2), 3.2))
    xs = range(len(names))
    ax.bar(xs, [h if h is not None else 0 for h in heights], color=["#4c72b0" if h is not None else "#c44e52" for h in heights])
    for x, r, h in zip(xs, rows, heights):
        ax.annotate(str(r["max"]), (x, (h or 0) + 0.05), ha="center", va="bottom", fontsize=8)
    for k, claim in enumerate(report["claims"]):
        color = "#55a868" if claim["holds"] else "#c44e52"
        ax.axhline(claim["bound"], ls="--", lw=1, color=color, label=f"{claim['claim']} ({'holds' if claim['holds'] else 'fails'})")
    ax.set_xticks(list(xs), names)
    ax.set_ylabel("max degree over solutions")
    ax.set_title(report["equation"]["name"])
    if report["claims"]:
        ax.legend(fontsize=7, loc="upper left")
    ax.set_ylim(bottom=-0.6)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path

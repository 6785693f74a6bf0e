"""Figures for ``maskdist bench``: distance and runtime against redundancy."""

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _series(records):
    """Group rows by model family; the last parameter is the redundancy axis."""
    groups = defaultdict(list)
    for rec in records:
        params = rec["params"].split(",")
        family = rec["model"] + (f"({','.join(params[:-1])})" if len(params) > 1 else "")
        groups[family].append((int(params[-1]), rec))
    return {k: sorted(v, key=lambda p: p[0]) for k, v in sorted(groups.items())}


def plot_bench(records, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    groups = _series(records)
    written = []

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for family, pts in groups.items():
        xs = [x for x, _ in pts]
        ax.plot(xs, [float(r["value"]) for _, r in pts], marker="o", label=family)
        ax.scatter(xs, [float(r["expected"]) for _, r in pts], marker="x", color="black", zorder=3)
    ax.set_xlabel("redundancy")
    ax.set_ylabel("masking distance")
    ax.set_ylim(0, 1.05)
    ax.set_title("Masking distance (x: expected)")
    ax.legend(fontsize="small")
    path = out / "distance.png"
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for family, pts in groups.items():
        ax.plot([x for x, _ in pts], [r["seconds"] for _, r in pts], marker="o", label=family)
    ax.set_xlabel("redundancy")
    ax.set_ylabel("wall time (s)")
    ax.set_yscale("log")
    ax.set_title("Analysis time")
    ax.legend(fontsize="small")
    path = out / "runtime.png"
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written

"""Deterministic SVG plots over trial CSVs."""

from __future__ import annotations

import math
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .harness import read_records_csv

_SVG_SALT = "rismax-fixed"


def _grouped_means(rows, value_key):
    acc: dict[tuple[str, int], list[float]] = defaultdict(list)
    for row in rows:
        acc[(row["variant"], int(row["k"]))].append(float(row[value_key]))
    series: dict[str, tuple[list[int], list[float]]] = {}
    for variant in sorted({v for v, _ in acc}):
        ks = sorted(k for v, k in acc if v == variant)
        means = [math.fsum(acc[(variant, k)]) / len(acc[(variant, k)]) for k in ks]
        series[variant] = (ks, means)
    return series


def _render(series, ylabel, title, out_path) -> None:
    plt.rcParams["svg.hashsalt"] = _SVG_SALT
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for variant, (ks, means) in series.items():
        ax.plot(ks, means, marker="o", label=variant)
    ax.set_xlabel("k")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if series:
        ax.legend()
    fig.tight_layout()
    # a pinned hashsalt plus a cleared Date field keeps the SVG byte-stable
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_plot(csv_paths, out_dir) -> list[str]:
    rows: list[dict] = []
    for path in csv_paths:
        rows.extend(read_records_csv(path))
    os.makedirs(out_dir, exist_ok=True)
    spread_path = os.path.join(out_dir, "spread_vs_k.svg")
    time_path = os.path.join(out_dir, "time_vs_k.svg")
    _render(_grouped_means(rows, "spread_mean"),
            "estimated spread", "spread vs k", spread_path)
    _render(_grouped_means(rows, "time_total_ms"),
            "total time (ms)", "running time vs k", time_path)
    return [spread_path, time_path]

"""Render qexact figure-data CSVs as plots.

Each family consumes exactly one CSV schema written by `qexact figures` and
produces one image.  All statistics shown (medians, quartiles, whiskers,
outliers) are recomputed here from the raw per-run rows; the CSVs stay raw.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # batch tool: never require a display
import matplotlib.pyplot as plt
import numpy as np

FAMILY_SCHEMAS = {
    "ratio": ["n", "inc1", "pow2"],
    "Sm0": ["n", "m0", "ratio"],
    "final_error": ["mode", "n", "k", "m0", "final_error_rate"],
    "mean_samples": ["n", "algo", "mean_samples"],
    "junta_updates": ["n", "k", "updates"],
}

FAMILY_FILES = {
    "ratio": "fig_ratio.csv",
    "Sm0": "fig_Sm0.csv",
    "final_error": "fig_final_error.csv",
    "mean_samples": "fig_mean_samples.csv",
    "junta_updates": "fig_junta_updates.csv",
}


class SchemaMismatch(Exception):
    """Input CSV does not carry the family's columns (or has no data rows)."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: Path
    family: str
    output_image: Path

    def __post_init__(self) -> None:
        if self.family not in FAMILY_SCHEMAS:
            raise ValueError(f"unknown figure family {self.family!r}")


@dataclass
class RenderResult:
    path: Path
    # junta_updates only: per (n, k) box statistics recomputed from raw rows
    box_stats: dict[tuple[int, int], dict] | None = None


def _load_rows(spec: FigureSpec) -> list[dict]:
    with open(spec.input_csv, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch(f"{spec.input_csv}: empty file") from None
        expected = FAMILY_SCHEMAS[spec.family]
        if header != expected:
            missing = [c for c in expected if c not in header]
            unexpected = [c for c in header if c not in expected]
            raise SchemaMismatch(
                f"{spec.input_csv}: header {header} does not match family "
                f"'{spec.family}' (missing {missing}, unexpected {unexpected})"
            )
        rows = [dict(zip(header, row)) for row in reader]
    if not rows:
        raise SchemaMismatch(f"{spec.input_csv}: no data rows")
    return rows


def _box_stats(values: np.ndarray) -> dict:
    """Tukey box statistics: median, quartiles, 1.5 IQR whiskers, outliers."""
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    iqr = q3 - q1
    inside = values[(values >= q1 - 1.5 * iqr) & (values <= q3 + 1.5 * iqr)]
    lo, hi = inside.min(), inside.max()
    return {
        "med": med,
        "q1": q1,
        "q3": q3,
        "whislo": lo,
        "whishi": hi,
        "fliers": values[(values < lo) | (values > hi)],
    }


def _render_ratio(rows, ax):
    ns = [int(r["n"]) for r in rows]
    ax.plot(ns, [float(r["inc1"]) for r in rows], marker="o", label="increment by 1")
    ax.plot(ns, [float(r["pow2"]) for r in rows], marker="s", label="powers of 2")
    ax.set_xlabel("n")
    ax.set_ylabel("samples / naive budget")
    ax.set_title("Update-phase sample ratio vs naive")
    ax.legend()


def _render_sm0(rows, ax):
    by_m0: dict[int, list[tuple[int, float]]] = {}
    for r in rows:
        by_m0.setdefault(int(r["m0"]), []).append((int(r["n"]), float(r["ratio"])))
    for m0, pts in sorted(by_m0.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"m0={m0}")
    ax.set_xlabel("n")
    ax.set_ylabel("samples / naive budget")
    ax.set_title("Two-ancilla schedule totals vs naive")
    ax.legend()


def _final_error_label(row: dict) -> str:
    if row["mode"] == "naive":
        return f"n={row['n']} naive"
    if row["mode"] == "refined":
        return f"n={row['n']} m0={row['m0']}"
    return f"n={row['n']} k={row['k']}"


def _render_final_error(rows, ax):
    groups: dict[str, list[float]] = {}
    for r in rows:
        groups.setdefault(_final_error_label(r), []).append(float(r["final_error_rate"]))
    labels = sorted(groups)
    ax.violinplot([groups[label] for label in labels], showmedians=True)
    ax.set_xticks(range(1, len(labels) + 1))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("final error rate")
    ax.set_title("Final error rate per cell")


def _render_mean_samples(rows, ax):
    by_algo: dict[str, list[tuple[int, float]]] = {}
    for r in rows:
        by_algo.setdefault(r["algo"], []).append((int(r["n"]), float(r["mean_samples"])))
    for algo, pts in sorted(by_algo.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=algo)
    ax.set_xlabel("n")
    ax.set_ylabel("mean samples per training")
    ax.set_title("Mean sample counts")
    ax.legend()


def _render_junta_updates(rows, fig) -> dict[tuple[int, int], dict]:
    data: dict[int, dict[int, list[int]]] = {}
    for r in rows:
        data.setdefault(int(r["n"]), {}).setdefault(int(r["k"]), []).append(int(r["updates"]))
    stats_out: dict[tuple[int, int], dict] = {}
    axes = fig.subplots(1, len(data), squeeze=False)[0]
    for ax, n in zip(axes, sorted(data)):
        ks = sorted(data[n])
        stats = []
        for k in ks:
            s = _box_stats(np.asarray(data[n][k], dtype=float))
            s["label"] = str(k)
            stats.append(s)
            stats_out[(n, k)] = s
        ax.bxp(stats, showfliers=True)
        ax.set_xlabel("k")
        ax.set_ylabel("update phases")
        ax.set_title(f"n={n}")
    fig.suptitle("Update phases per training run")
    return stats_out


def render(spec: FigureSpec) -> RenderResult:
    """Render one family; raises SchemaMismatch before writing anything."""
    rows = _load_rows(spec)
    spec.output_image.parent.mkdir(parents=True, exist_ok=True)
    box_stats = None
    if spec.family == "junta_updates":
        fig = plt.figure(figsize=(10, 4))
        box_stats = _render_junta_updates(rows, fig)
    else:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        {
            "ratio": _render_ratio,
            "Sm0": _render_sm0,
            "final_error": _render_final_error,
            "mean_samples": _render_mean_samples,
        }[spec.family](rows, ax)
    fig.tight_layout()
    fig.savefig(spec.output_image, dpi=150)
    plt.close(fig)
    return RenderResult(spec.output_image, box_stats)

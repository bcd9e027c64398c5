"""CSV, text and SVG output for benchmark reports."""

from __future__ import annotations

import csv
import os
from dataclasses import fields

from ..partition import STRATEGIES
from .experiment import ALTERNATIVES, COMPARISONS, STAGES, BenchReport, RunRecord

CSV_COLUMNS = (
    "dataset", "n_vars", "run", "strategy", "seed", "t_pipeline_ms", "t_merge_ms",
    "n_premerge", "mean_obs_premerge", "mean_vars_premerge", "n_final", "t_matrix_ms",
)
STRATEGY_COLORS = {"similarity": "green", "random": "yellow", "dissimilarity": "red"}
SIGNIFICANCE = 0.05

CHARTS = (
    ("pipeline_time", "t_pipeline_ms", "pipeline time (ms)"),
    ("merge_time", "t_merge_ms", "merge time (ms)"),
    ("mean_obs", "mean_obs_premerge", "observations per pre-merge pattern"),
    ("mean_vars", "mean_vars_premerge", "variables per pre-merge pattern"),
)


def _fmt6(x: float) -> str:
    return format(x, ".6g")


def write_csv(report: BenchReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in report.records:
            w.writerow([
                r.dataset, r.n_vars, r.run, r.strategy, r.seed,
                round(r.t_pipeline_ms), round(r.t_merge_ms), r.n_premerge,
                _fmt6(r.mean_obs_premerge), _fmt6(r.mean_vars_premerge), r.n_final,
                round(r.t_matrix_ms),
            ])


def read_csv(path) -> list[RunRecord]:
    types = {f.name: f.type for f in fields(RunRecord)}
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            kw = {}
            for k, v in row.items():
                t = types[k]
                kw[k] = int(v) if t == "int" else float(v) if t == "float" else v
            out.append(RunRecord(**kw))
    return out


def ttest_rows(reports) -> list[tuple]:
    """``(comparison, dataset, stage, alternative, p)`` for each report."""
    if isinstance(reports, BenchReport):
        reports = [reports]
    rows = []
    for rep in reports:
        table = rep.ttests()
        for base, other in COMPARISONS:
            comp = f"{base}/{other}"
            for alt in ALTERNATIVES:
                for stage in STAGES:
                    rows.append((comp, rep.dataset, stage, alt, table[(comp, stage, alt)]))
    return rows


def summary_table(reports) -> str:
    """One-sided paired t-test p-values laid out one row per comparison and
    dataset. Cells below 0.05 carry a trailing ``*``."""
    rows = ttest_rows(reports)
    cols = [(alt, stage) for alt in ALTERNATIVES for stage in STAGES]
    header = ["comparison", "dataset"] + [f"{alt}:{stage}" for alt, stage in cols]
    cells: dict = {}
    order = []
    for comp, ds, stage, alt, p in rows:
        if (comp, ds) not in cells:
            cells[(comp, ds)] = {}
            order.append((comp, ds))
        mark = "*" if p < SIGNIFICANCE else ""
        cells[(comp, ds)][(alt, stage)] = f"{p:.2f}{mark}"
    lines = [header] + [[comp, ds] + [cells[(comp, ds)][c] for c in cols] for comp, ds in order]
    widths = [max(len(line[k]) for line in lines) for k in range(len(header))]
    text = "\n".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in lines)
    return text + "\n* p < 0.05: reject equal mean times (less: similarity faster, greater: slower)\n"


def render_svg(report: BenchReport, out_dir) -> list[str]:
    """Write one SVG per tracked quantity: mean over runs against the
    number of variables, one line per strategy with a +-1 sd band."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(out_dir, exist_ok=True)
    agg = report.aggregates()
    counts = sorted({n for n, _ in agg})
    paths = []
    for slug, col, label in CHARTS:
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for s in STRATEGIES:
            pts = [agg[(n, s)][col] for n in counts if (n, s) in agg]
            if not pts:
                continue
            xs = [n for n in counts if (n, s) in agg]
            mean = [m for m, _ in pts]
            sd = [v for _, v in pts]
            color = STRATEGY_COLORS[s]
            ax.plot(xs, mean, color=color, marker="o", label=s)
            ax.fill_between(xs, [m - v for m, v in zip(mean, sd)], [m + v for m, v in zip(mean, sd)],
                            color=color, alpha=0.25, linewidth=0)
        ax.set_xlabel("number of variables")
        ax.set_ylabel(label)
        ax.set_title(report.dataset)
        ax.legend(fontsize=7)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{report.dataset}_{slug}.svg")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths

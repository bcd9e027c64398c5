"""
Timing the three partitioning strategies
========================================

A shortened run of the full comparison on chess: random subsets of 4 and 8
variables, five runs each. Results go to ``bench_output/``.
"""

from pathlib import Path

from vpart.bench import ExperimentConfig, render_svg, run_experiment, summary_table, write_csv

ROOT = Path(__file__).resolve().parent.parent
out = Path("bench_output")
out.mkdir(exist_ok=True)

cfg = ExperimentConfig(dataset_path=str(ROOT / "data" / "chess.dat"), counts=(4, 8), runs=5, seed=0)
report = run_experiment(cfg)
print(f"min_sup used: {report.min_sup:.4f}")

for (n, strategy), cols in sorted(report.aggregates().items()):
    mean, sd = cols["n_final"]
    t, _ = cols["t_pipeline_ms"]
    print(f"{n:3d} {strategy:13s} patterns {mean:7.1f} +- {sd:5.1f}   pipeline {t:7.1f} ms")

print(summary_table(report))
write_csv(report, out / "runs.csv")
for path in render_svg(report, out):
    print("wrote", path)

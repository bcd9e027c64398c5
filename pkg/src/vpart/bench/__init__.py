"""Benchmark harness comparing partitioning strategies."""

from .experiment import (
    BenchReport,
    ExperimentConfig,
    RunRecord,
    StrategyMismatchError,
    default_min_sup,
    run_experiment,
)
from .report import read_csv, render_svg, summary_table, write_csv
from .ttest import paired_t_one_sided

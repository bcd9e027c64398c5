"""
Strategy-comparison experiment.

For every requested variable count and run, one random variable subset is
drawn and pushed through the full pipeline (partition, per-partition mining,
merge) once per partitioning strategy. The three final pattern sets must be
identical; only the timings may differ.

Seeds are derived with :class:`numpy.random.SeedSequence`: the subset of run
``r`` at ``n`` variables uses ``spawn_key=(n, r, 0)`` and the random
partition ``spawn_key=(n, r, 1)`` under the master seed, so adding a
strategy never changes which subsets are drawn.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..dataset import Dataset, load, min_significant_support, project
from ..merge import MergeInput, merge_stats, pattern_merge
from ..miner import apriori
from ..partition import STRATEGIES, capped_agglomerative, random_partition
from ..similarity import build_matrix
from .ttest import paired_t_one_sided

log = logging.getLogger(__name__)

COMPARISONS = (("similarity", "dissimilarity"), ("similarity", "random"))
STAGES = ("merge", "pipeline")
ALTERNATIVES = ("less", "greater")
MIN_SUP_FLOOR = 0.01


class StrategyMismatchError(RuntimeError):
    """Partitioning strategies disagreed on the final pattern set."""


@dataclass
class ExperimentConfig:
    dataset_path: str | None = None
    fmt: str | None = None
    counts: tuple = (4, 8, 12, 16, 20)
    runs: int = 10
    cap: int = 4
    min_sup: float | None = None
    metric: str = "sim_co"
    seed: int = 0
    parallel_mine: bool = False
    include_matrix_time: bool = False
    pattern_len: int = 4
    alpha: float = 0.05

    def check(self, d: Dataset):
        if self.runs < 2:
            raise ValueError("runs must be >= 2 for the paired t-test")
        too_many = [c for c in self.counts if c > len(d.variables)]
        if too_many:
            raise ValueError(f"variable counts {too_many} exceed the {len(d.variables)} variables of {d.name!r}")


@dataclass
class RunRecord:
    dataset: str
    n_vars: int
    run: int
    strategy: str
    seed: int
    t_pipeline_ms: float
    t_merge_ms: float
    n_premerge: int
    mean_obs_premerge: float
    mean_vars_premerge: float
    n_final: int
    t_matrix_ms: float = 0.0


@dataclass
class BenchReport:
    dataset: str
    min_sup: float
    records: list = field(default_factory=list)

    def select(self, **where) -> list:
        return [r for r in self.records if all(getattr(r, k) == v for k, v in where.items())]

    def aggregates(self) -> dict:
        """``{(n_vars, strategy): {column: (mean, std)}}`` over runs."""
        cols = ("t_pipeline_ms", "t_merge_ms", "mean_obs_premerge", "mean_vars_premerge", "n_final")
        out = {}
        for n in sorted({r.n_vars for r in self.records}):
            for s in STRATEGIES:
                rows = self.select(n_vars=n, strategy=s)
                if not rows:
                    continue
                out[(n, s)] = {
                    c: (float(np.mean([getattr(r, c) for r in rows])),
                        float(np.std([getattr(r, c) for r in rows], ddof=1)) if len(rows) > 1 else 0.0)
                    for c in cols
                }
        return out

    def paired_times(self, strategy: str, stage: str) -> np.ndarray:
        col = "t_merge_ms" if stage == "merge" else "t_pipeline_ms"
        rows = sorted(self.select(strategy=strategy), key=lambda r: (r.n_vars, r.run))
        return np.array([getattr(r, col) for r in rows], dtype=float)

    def ttests(self) -> dict:
        """``{(comparison, stage, alternative): p}``, pairing runs across all counts."""
        table = {}
        for base, other in COMPARISONS:
            for stage in STAGES:
                a = self.paired_times(base, stage)
                b = self.paired_times(other, stage)
                for alt in ALTERNATIVES:
                    table[(f"{base}/{other}", stage, alt)] = paired_t_one_sided(a, b, alt)
        return table


def default_min_sup(d: Dataset, pattern_len: int = 4, alpha: float = 0.05) -> float:
    return max(min_significant_support(d, pattern_len, alpha), MIN_SUP_FLOOR)


def _seed(master: int, *key: int) -> int:
    ss = np.random.SeedSequence(entropy=master, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def draw_subset(d: Dataset, n_vars: int, master: int, run: int) -> tuple[list, int]:
    seed = _seed(master, n_vars, run, 0)
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen = rng.choice(len(d.variables), size=n_vars, replace=False)
    return sorted(d.variables[k] for k in chosen), seed


def _mine(d, clusters, min_sup, parallel):
    jobs = [(c, f"partition-{k}") for k, c in enumerate(clusters)]
    if parallel and len(jobs) > 1:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(lambda job: apriori(d, job[0], min_sup, source=job[1]), jobs))
    return [apriori(d, c, min_sup, source=src) for c, src in jobs]


def run_pipeline(d: Dataset, subset, strategy: str, cfg: ExperimentConfig, min_sup: float,
                 partition_seed: int | None = None):
    """Partition ``subset``, mine every partition and merge.

    Returns ``(final PatternSet, pre-merge PatternSets, timings in ms)``.
    """
    t_matrix = 0.0
    t0 = time.perf_counter()
    if strategy == "random" or len(subset) < 2:
        plan = random_partition(subset, cfg.cap, partition_seed)
    else:
        tm = time.perf_counter()
        matrix = build_matrix(project(d, subset), cfg.metric)
        t_matrix = (time.perf_counter() - tm) * 1e3
        objective = "most-similar" if strategy == "similarity" else "least-similar"
        tp = time.perf_counter()
        plan = capped_agglomerative(matrix, cfg.cap, objective)
        t0 = tp
    pre = _mine(d, plan.clusters, min_sup, cfg.parallel_mine)
    tmerge = time.perf_counter()
    final = pattern_merge(MergeInput(pre, d.n_obs, min_sup))
    end = time.perf_counter()
    t_merge = (end - tmerge) * 1e3
    t_pipeline = (end - t0) * 1e3
    if cfg.include_matrix_time:
        t_pipeline += t_matrix
    return final, pre, {"pipeline": t_pipeline, "merge": t_merge, "matrix": t_matrix}


def run_experiment(cfg: ExperimentConfig, dataset: Dataset | None = None) -> BenchReport:
    """Run the full strategy comparison described by ``cfg``.

    Raises :class:`StrategyMismatchError` if the strategies ever disagree.
    """
    d = dataset if dataset is not None else load(cfg.dataset_path, cfg.fmt)
    cfg.check(d)
    min_sup = cfg.min_sup if cfg.min_sup is not None else default_min_sup(d, cfg.pattern_len, cfg.alpha)
    report = BenchReport(d.name, min_sup)
    for n in cfg.counts:
        for run in range(cfg.runs):
            subset, seed = draw_subset(d, n, cfg.seed, run)
            part_seed = _seed(cfg.seed, n, run, 1)
            reference = None
            for strategy in STRATEGIES:
                final, pre, t = run_pipeline(d, subset, strategy, cfg, min_sup, part_seed)
                st = merge_stats(pre, final)
                keys = final.keys()
                if reference is None:
                    reference = keys
                elif keys != reference:
                    raise StrategyMismatchError(
                        f"{d.name}: n_vars={n} run={run}: {strategy} produced {len(keys)} patterns, "
                        f"{STRATEGIES[0]} produced {len(reference)}"
                    )
                report.records.append(RunRecord(
                    dataset=d.name, n_vars=n, run=run, strategy=strategy, seed=seed,
                    t_pipeline_ms=t["pipeline"], t_merge_ms=t["merge"],
                    n_premerge=st.n_premerge, mean_obs_premerge=st.mean_obs,
                    mean_vars_premerge=st.mean_vars, n_final=st.n_final, t_matrix_ms=t["matrix"],
                ))
            log.info("%s n_vars=%d run=%d: %d final patterns", d.name, n, run, len(reference))
    return report


def mean_final_count(report: BenchReport, n_vars: int) -> float:
    rows = report.select(n_vars=n_vars, strategy=STRATEGIES[0])
    return math.fsum(r.n_final for r in rows) / len(rows) if rows else float("nan")


__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "BenchReport",
    "StrategyMismatchError",
    "run_experiment",
    "run_pipeline",
    "draw_subset",
    "default_min_sup",
    "mean_final_count",
]

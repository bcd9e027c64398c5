"""
Cross-partition pattern merging.

Given the frequent patterns mined independently on each partition of a
non-overlapping vertical partition, rebuild the closed frequent patterns of
the whole variable set.

For partition ``i`` (ascending) a working set starts from that partition's
patterns. Each later partition ``j`` is then joined against the working set
as it stood before the pass; joins that stay frequent are appended, so a
pattern spanning ``i`` and several later partitions grows one partition at a
time. Every working-set pattern not dominated by another working-set or
already-final pattern becomes final.

Any pattern whose lowest partition is ``i`` is produced in round ``i``, and
its closure is produced no later, which is why the result equals the closed
patterns of the full data.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .miner import Pattern, PatternSet, min_support_count


@dataclass
class MergeInput:
    cluster_patterns: Sequence[PatternSet]
    n_obs: int
    min_sup: float


def _join_items(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def join(p: Pattern, q: Pattern, n_obs: int, min_sup: float) -> Pattern | None:
    """Combine two patterns over disjoint variables; ``None`` if infrequent."""
    if p.variables & q.variables:
        raise ValueError(f"patterns share variables {sorted(p.variables & q.variables, key=str)}")
    mask = p.mask & q.mask
    if mask.bit_count() < min_support_count(min_sup, n_obs):
        return None
    return Pattern(_join_items(p.items, q.items), mask)


def _dominated(p: Pattern, index: dict) -> bool:
    for other in index.get(p.mask, ()):
        if len(other) > len(p.items) and p.itemset < other:
            return True
    return False


def pattern_merge(inp: MergeInput) -> PatternSet:
    clusters = [list(ps) for ps in inp.cluster_patterns]
    seen_vars: set = set()
    for pos, ps in enumerate(clusters):
        owned = set().union(*(p.variables for p in ps))
        if owned & seen_vars:
            raise ValueError(f"partition {pos} shares variables with an earlier partition")
        seen_vars |= owned
    k_min = min_support_count(inp.min_sup, inp.n_obs)
    final: list[Pattern] = []
    final_index: dict = defaultdict(list)

    for i, seed in enumerate(clusters):
        working: list[Pattern] = []
        seen: set = set()
        for p in seed:
            if p.items not in seen:
                seen.add(p.items)
                working.append(p)

        for j in range(i + 1, len(clusters)):
            n_before = len(working)
            for a in range(n_before):
                p = working[a]
                for q in clusters[j]:
                    mask = p.mask & q.mask
                    if mask.bit_count() < k_min:
                        continue
                    items = _join_items(p.items, q.items)
                    if items not in seen:
                        seen.add(items)
                        working.append(Pattern(items, mask))

        index: dict = defaultdict(list)
        for p in working:
            index[p.mask].append(p.itemset)
        promoted = [p for p in working if not _dominated(p, index) and not _dominated(p, final_index)]
        for p in promoted:
            final.append(p)
            final_index[p.mask].append(p.itemset)

    final.sort(key=lambda p: p.items)
    return PatternSet(final, inp.min_sup, "merged")


@dataclass
class MergeStats:
    mean_obs: float
    mean_vars: float
    n_premerge: int
    n_final: int
    empty: bool = False
    merge_wall_ms: float | None = None

    def to_dict(self) -> dict:
        return {
            "pre_merge_count": self.n_premerge,
            "final_count": self.n_final,
            "mean_obs": self.mean_obs,
            "mean_vars": self.mean_vars,
            "merge_wall_ms": self.merge_wall_ms,
        }


def merge_stats(before: Sequence[PatternSet], after: PatternSet, merge_wall_ms: float | None = None) -> MergeStats:
    """Mean observations and variables of the pre-merge patterns, plus counts."""
    pats = [p for ps in before for p in ps]
    if not pats:
        return MergeStats(0.0, 0.0, 0, len(after), empty=True, merge_wall_ms=merge_wall_ms)
    mean_obs = sum(p.support for p in pats) / len(pats)
    mean_vars = sum(len(p.items) for p in pats) / len(pats)
    return MergeStats(mean_obs, mean_vars, len(pats), len(after), merge_wall_ms=merge_wall_ms)


def timed_merge(inp: MergeInput) -> tuple[PatternSet, float]:
    """Run :func:`pattern_merge` and return it with its wall time in ms."""
    t0 = time.perf_counter()
    out = pattern_merge(inp)
    return out, (time.perf_counter() - t0) * 1e3

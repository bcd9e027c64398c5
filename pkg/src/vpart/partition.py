"""
Non-overlapping vertical partitioning of variables.

Clusters are built bottom-up by average linkage, either joining the most
similar clusters first (``"similarity"``) or the least similar
(``"dissimilarity"``). A size cap bounds every cluster; once a merge would
exceed it the pair is no longer a candidate. The ``"random"`` strategy
shuffles the variables and cuts them into consecutive chunks of ``cap``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .similarity import SimilarityMatrix

STRATEGIES = ("similarity", "dissimilarity", "random")
DEFAULT_CAP = 4


@dataclass(frozen=True)
class PartitionPlan:
    clusters: tuple[tuple, ...]
    cap: int
    strategy_tag: str
    seed: int | None = None

    @property
    def variables(self) -> list:
        return [v for c in self.clusters for v in c]

    def to_json(self) -> str:
        return json.dumps(
            {
                "cap": self.cap,
                "strategy": self.strategy_tag,
                "seed": self.seed,
                "clusters": [list(c) for c in self.clusters],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "PartitionPlan":
        raw = json.loads(text)
        return cls(
            clusters=tuple(tuple(c) for c in raw["clusters"]),
            cap=int(raw["cap"]),
            strategy_tag=raw["strategy"],
            seed=raw.get("seed"),
        )


def _check_cap(cap):
    if int(cap) != cap or cap < 1:
        raise ValueError(f"cap must be a positive integer, got {cap!r}")


def capped_agglomerative(m: SimilarityMatrix, cap: int = DEFAULT_CAP, objective: str = "most-similar") -> PartitionPlan:
    """Greedy average-linkage clustering with a maximum cluster size.

    Starting from singletons, repeatedly merge the pair of clusters with the
    highest (``objective="most-similar"``) or lowest (``"least-similar"``)
    average pairwise score among the pairs whose combined size is at most
    ``cap``. Stops when no pair qualifies. Equal scores are resolved in
    favour of the pair whose smallest variable ids compare lowest.
    """
    _check_cap(cap)
    if objective not in ("most-similar", "least-similar"):
        raise ValueError(f"unknown objective {objective!r}")
    if m.order < 1:
        raise ValueError("empty similarity matrix")
    # clusters live at the position of their smallest variable id
    order = sorted(range(m.order), key=lambda k: m.variable_ids[k])
    ids = [m.variable_ids[k] for k in order]
    scores = np.asarray(m.scores, dtype=float)[np.ix_(order, order)]
    if objective == "least-similar":
        scores = -scores
    n = len(ids)
    members: list[list[int] | None] = [[k] for k in range(n)]
    size = np.ones(n, dtype=np.int64)
    link_sum = scores.copy()
    np.fill_diagonal(link_sum, 0.0)
    active = np.ones(n, dtype=bool)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    while True:
        fits = (size[:, None] + size[None, :]) <= cap
        candidates = upper & fits & active[:, None] & active[None, :]
        if not candidates.any():
            break
        linkage = np.where(candidates, link_sum / np.outer(size, size), -np.inf)
        best = linkage.max()
        # row-major first hit = smallest (min-id, min-id) pair
        i, j = (int(x) for x in np.argwhere(linkage == best)[0])
        members[i].extend(members[j])
        members[j] = None
        size[i] += size[j]
        active[j] = False
        link_sum[i, :] += link_sum[j, :]
        link_sum[:, i] += link_sum[:, j]
        link_sum[i, i] = 0.0

    clusters = tuple(
        tuple(ids[k] for k in sorted(mem)) for mem in members if mem is not None
    )
    tag = "similarity" if objective == "most-similar" else "dissimilarity"
    return PartitionPlan(clusters, int(cap), tag)


def random_partition(variables, cap: int = DEFAULT_CAP, seed: int | None = None) -> PartitionPlan:
    """Shuffle ``variables`` with a seeded PCG64 generator (Fisher-Yates) and
    cut the result into consecutive groups of ``cap``."""
    _check_cap(cap)
    variables = list(variables)
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(len(variables))
    shuffled = [variables[k] for k in perm]
    clusters = tuple(tuple(shuffled[s:s + cap]) for s in range(0, len(shuffled), cap))
    return PartitionPlan(clusters, int(cap), "random", seed)


def make_plan(strategy: str, variables, cap: int = DEFAULT_CAP, matrix: SimilarityMatrix | None = None,
              seed: int | None = None) -> PartitionPlan:
    if strategy == "random":
        return random_partition(variables, cap, seed)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if matrix is None:
        raise ValueError(f"strategy {strategy!r} needs a similarity matrix")
    objective = "most-similar" if strategy == "similarity" else "least-similar"
    return capped_agglomerative(matrix, cap, objective)


def validate(plan: PartitionPlan, variables) -> list[str]:
    """Check that ``plan`` is a disjoint cover of ``variables`` within its cap.

    Returns a list of violation messages; an empty list means the plan is
    valid.
    """
    problems = []
    wanted = set(variables)
    seen: set = set()
    for k, cluster in enumerate(plan.clusters):
        if len(cluster) == 0:
            problems.append(f"empty cluster at position {k}")
        if len(cluster) > plan.cap:
            problems.append(f"cluster {k} has {len(cluster)} variables, cap is {plan.cap}")
        for v in cluster:
            if v in seen:
                problems.append(f"overlap: variable {v!r} in more than one cluster")
            seen.add(v)
    for v in sorted(wanted - seen, key=str):
        problems.append(f"uncovered variable {v!r}")
    for v in sorted(seen - wanted, key=str):
        problems.append(f"unknown variable {v!r}")
    return problems

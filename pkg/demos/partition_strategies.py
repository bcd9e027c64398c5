"""
Grouping variables under a size cap
====================================

The same similarity matrix partitioned three ways: most similar together,
least similar together, and at random.
"""

from pathlib import Path

import numpy as np

import vpart
from vpart.partition import make_plan

DATA = Path(__file__).resolve().parent.parent / "data"

chess = vpart.load(DATA / "chess.dat")
rng = np.random.default_rng(5)
subset = sorted(rng.choice(chess.variables, 10, replace=False).tolist())
m = vpart.build_matrix(vpart.project(chess, subset), "sim_co")

for strategy in ("similarity", "dissimilarity", "random"):
    plan = make_plan(strategy, subset, cap=4, matrix=m, seed=1)
    # mean within-cluster score, a rough view of what each strategy optimises
    within = [m.score(a, b) for c in plan.clusters for i, a in enumerate(c) for b in c[i + 1:]]
    print(f"{strategy:13s} {plan.clusters}  mean within {np.mean(within):.3f}")
    assert vpart.validate(plan, subset) == []

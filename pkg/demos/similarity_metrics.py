"""
Comparing variables with categorical similarity scores
=======================================================

Five ways of scoring how alike two partially observed variables are, first
on hand-made columns and then across a slice of the chess data.
"""

from pathlib import Path

import numpy as np

import vpart

DATA = Path(__file__).resolve().parent.parent / "data"

# two columns where every value of one pins down the value of the other
a = ["x", "x", "y", "y", None, "z"]
b = ["p", "p", "q", "q", "q", None]

for name in vpart.similarity.METRIC_NAMES[:3]:
    print(f"{name:8s} {vpart.similarity.get_metric(name)(a, b):.3f}")

# a repeating non-linear relation: Pearson sees nothing, sim_co does
x = [1, 2, 3, 1, 2, 3]
y = [5, 9, 5, 5, 9, 5]
print(f"pearson  {vpart.pearson(x, y):.3f}")
print(f"sim_co   {vpart.sim_co(x, y):.3f}")

# a whole matrix over eight chess variables
chess = vpart.load(DATA / "chess.dat")
part = vpart.project(chess, chess.variables[:8])
m = vpart.build_matrix(part, "sim_co")
np.set_printoptions(precision=2, suppress=True)
print(m.variable_ids)
print(m.scores)

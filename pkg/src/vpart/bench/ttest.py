"""One-sided paired t-test."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import stdtr


def paired_t_one_sided(a, b, alternative: str = "less") -> float:
    """p-value of a one-sided paired t-test on ``a - b``.

    ``alternative="less"`` tests whether ``a`` is smaller on average
    (``P(T <= t)``), ``"greater"`` whether it is larger (``P(T >= t)``),
    with ``n - 1`` degrees of freedom.

    When every difference is identical the statistic is undefined: a zero
    mean difference gives 0.5 on both sides, otherwise the side agreeing with
    the sign of the difference gets 0 and the other side 1.
    """
    if alternative not in ("less", "greater"):
        raise ValueError(f"alternative must be 'less' or 'greater', got {alternative!r}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired samples must be 1-D and of equal length")
    n = len(a)
    if n < 2:
        raise ValueError("need at least 2 pairs")
    d = a - b
    if np.all(d == d[0]):
        if d[0] == 0.0:
            return 0.5
        if alternative == "less":
            return 0.0 if d[0] < 0 else 1.0
        return 0.0 if d[0] > 0 else 1.0
    mean = math.fsum(d.tolist()) / n
    sd = math.sqrt(math.fsum(((d - mean) ** 2).tolist()) / (n - 1))
    t = mean / (sd / math.sqrt(n))
    return float(stdtr(n - 1, t if alternative == "less" else -t))

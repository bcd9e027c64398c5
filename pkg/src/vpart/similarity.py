"""
Pairwise variable similarity.

Every metric takes two variables observed over the same observations and
returns a score. A variable can be given either as a plain sequence of
values (``None`` or NaN mark a missing cell) or as a :class:`VariableView`,
the encoded form a :class:`~vpart.dataset.Dataset` hands out.

Pairs are always formed over co-observed rows only. Where a metric divides
by the number of observations it uses the full count ``n_obs``, so missing
cells lower the score instead of being ignored.

Sums go through :func:`math.fsum`; being correctly rounded it makes every
metric exactly symmetric and exactly invariant to row permutations.
"""

from __future__ import annotations

import csv
import io
import math
import numbers
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dataset import Dataset

METRIC_NAMES = ("sim_co", "sim_or", "jaccard", "pearson", "kendall")


class MetricError(ValueError):
    """A metric precondition failed for a specific variable pair."""


@dataclass(frozen=True)
class VariableView:
    """One encoded column: value codes (``-1`` = missing) and their labels."""

    codes: np.ndarray
    labels: tuple

    @property
    def n_obs(self) -> int:
        return len(self.codes)

    @property
    def observed(self) -> np.ndarray:
        return self.codes >= 0

    @classmethod
    def of(cls, values) -> "VariableView":
        if isinstance(values, VariableView):
            return values
        lookup: dict = {}
        codes = np.empty(len(values), dtype=np.int64)
        for i, v in enumerate(values):
            if v is None or (isinstance(v, float) and math.isnan(v)):
                codes[i] = -1
                continue
            if isinstance(v, np.generic):
                v = v.item()
            code = lookup.get(v)
            if code is None:
                code = lookup[v] = len(lookup)
            codes[i] = code
        return cls(codes, tuple(lookup))

    @classmethod
    def from_dataset(cls, d: Dataset, var) -> "VariableView":
        return cls(d.codes(var), d.values(var))


@dataclass(frozen=True)
class PairDistribution:
    """Joint value counts of two variables over their co-observed rows."""

    n_obs: int
    co_obs: int
    pair_counts: dict
    marginal1: dict
    marginal2: dict


def _views(y1, y2, n_obs):
    v1, v2 = VariableView.of(y1), VariableView.of(y2)
    if v1.n_obs != v2.n_obs:
        raise ValueError(f"views cover {v1.n_obs} and {v2.n_obs} observations")
    if n_obs is not None and n_obs != v1.n_obs:
        raise ValueError(f"n_obs={n_obs} but views cover {v1.n_obs} observations")
    return v1, v2


def _pair_counts(v1: VariableView, v2: VariableView):
    """Unique co-observed code pairs, their counts and the full-range marginals."""
    both = v1.observed & v2.observed
    k2 = max(len(v2.labels), 1)
    keys = v1.codes[both] * k2 + v2.codes[both]
    uniq, counts = np.unique(keys, return_counts=True)
    m1 = np.bincount(v1.codes[v1.observed], minlength=len(v1.labels))
    m2 = np.bincount(v2.codes[v2.observed], minlength=len(v2.labels))
    return uniq // k2, uniq % k2, counts, m1, m2


def pair_distribution(y1, y2, n_obs: int | None = None) -> PairDistribution:
    v1, v2 = _views(y1, y2, n_obs)
    a, b, counts, m1, m2 = _pair_counts(v1, v2)
    pairs = {(v1.labels[i], v2.labels[j]): int(c) for i, j, c in zip(a, b, counts)}
    return PairDistribution(
        n_obs=v1.n_obs,
        co_obs=int(counts.sum()),
        pair_counts=pairs,
        marginal1={lab: int(c) for lab, c in zip(v1.labels, m1)},
        marginal2={lab: int(c) for lab, c in zip(v2.labels, m2)},
    )


def sim_co_factors(y1, y2, n_obs: int | None = None, base: float | None = None) -> tuple[float, float]:
    """The two factors of :func:`sim_co`.

    The first averages, over unique co-observed value pairs, the pair
    probability divided by the larger of its two marginal probabilities.
    The second is one minus the pair entropy normalised by ``log n_obs``.
    ``base`` selects the logarithm; the ratio does not depend on it.
    """
    v1, v2 = _views(y1, y2, n_obs)
    n = v1.n_obs
    a, b, counts, m1, m2 = _pair_counts(v1, v2)
    if n <= 1 or counts.sum() <= 1:
        return 0.0, 0.0
    confidence = math.fsum((counts / np.maximum(m1[a], m2[b])).tolist()) / len(counts)
    log = np.log if base is None else (lambda x: np.log(x) / math.log(base))
    p = counts / n
    entropy = -math.fsum((p * log(p)).tolist())
    max_entropy = -float(log(np.float64(1.0 / n)))
    return confidence, 1.0 - entropy / max_entropy


def sim_co(y1, y2, n_obs: int | None = None, base: float | None = None) -> float:
    """Likelihood of two variables forming constant-coherence patterns.

    >>> sim_co(["a", "a", "b", "b"], ["c", "c", "d", "d"])
    0.5
    """
    confidence, concentration = sim_co_factors(y1, y2, n_obs, base)
    return confidence * concentration


def _is_number(v) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _as_float(v):
    if _is_number(v):
        return float(v)
    if isinstance(v, str):
        try:
            return float(v)
        except ValueError:
            return None
    return None


def _order_tables(v1: VariableView, v2: VariableView):
    """Comparable float keys for the labels of two variables.

    Numeric when every label of both variables parses as a number, otherwise
    ranks in byte-lexicographic order of the string labels.
    """
    labels = v1.labels + v2.labels
    parsed = [_as_float(lab) for lab in labels]
    if all(p is not None for p in parsed):
        keys = np.asarray(parsed, dtype=float)
    elif all(isinstance(lab, str) for lab in labels):
        ordered = sorted(set(labels), key=lambda s: s.encode("utf-8"))
        rank = {lab: r for r, lab in enumerate(ordered)}
        keys = np.asarray([rank[lab] for lab in labels], dtype=float)
    else:
        raise TypeError("values are not mutually order-comparable")
    return keys[: len(v1.labels)], keys[len(v1.labels):]


def _co_observed_keys(v1, v2):
    t1, t2 = _order_tables(v1, v2)
    both = v1.observed & v2.observed
    return t1[v1.codes[both]], t2[v2.codes[both]]


def sim_or(y1, y2, n_obs: int | None = None) -> float:
    """Share of observations where one variable strictly dominates the other,
    taking the larger of the two directions."""
    v1, v2 = _views(y1, y2, n_obs)
    x, y = _co_observed_keys(v1, v2)
    if len(x) == 0:
        return 0.0
    greater = int(np.count_nonzero(x > y))
    less = int(np.count_nonzero(x < y))
    return max(greater, less) / v1.n_obs


def jaccard(y1, y2, n_obs: int | None = None) -> float:
    """Jaccard coefficient of the two presence sets (non-missing rows)."""
    v1, v2 = _views(y1, y2, n_obs)
    inter = int(np.count_nonzero(v1.observed & v2.observed))
    union = int(np.count_nonzero(v1.observed | v2.observed))
    return 0.0 if union == 0 else inter / union


def _numeric(v1, v2):
    t1 = np.asarray([_as_float(lab) for lab in v1.labels], dtype=object)
    t2 = np.asarray([_as_float(lab) for lab in v2.labels], dtype=object)
    if any(t is None for t in t1) or any(t is None for t in t2):
        raise TypeError("pearson needs numeric values")
    both = v1.observed & v2.observed
    return t1.astype(float)[v1.codes[both]], t2.astype(float)[v2.codes[both]]


def pearson(y1, y2, n_obs: int | None = None) -> float:
    """Sample correlation over co-observed rows; 0 if either side is constant.

    >>> pearson([1, 2, 3, 4, 5, 6], [2, 3, 4, 4, 3, 2])
    0.0
    """
    v1, v2 = _views(y1, y2, n_obs)
    x, y = _numeric(v1, v2)
    n = len(x)
    if n < 2:
        raise ValueError("pearson needs at least 2 co-observed rows")
    dx = x - math.fsum(x.tolist()) / n
    dy = y - math.fsum(y.tolist()) / n
    sxx = math.fsum((dx * dx).tolist())
    syy = math.fsum((dy * dy).tolist())
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = math.fsum((dx * dy).tolist()) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def _count_inversions(a: np.ndarray) -> int:
    """Number of pairs ``i < j`` with ``a[i] > a[j]`` (bottom-up merge count)."""
    a = np.asarray(a, dtype=np.int64)
    n = len(a)
    if n < 2:
        return 0
    span = int(a.max()) + 1
    idx = np.arange(n)
    inversions = 0
    width = 1
    while width < n:
        block = idx // (2 * width)
        right = (idx % (2 * width)) >= width
        key = block * span + a
        left_keys = key[~right]
        hi = np.searchsorted(left_keys, (block[right] + 1) * span, side="left")
        lo = np.searchsorted(left_keys, key[right], side="right")
        inversions += int((hi - lo).sum())
        a = np.sort(key) - block * span
        width *= 2
    return inversions


def _tied_pairs(*arrays) -> int:
    _, counts = np.unique(np.column_stack(arrays), axis=0, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(y1, y2, n_obs: int | None = None) -> float:
    """Tie-corrected Kendall rank correlation (tau-b) over co-observed rows."""
    v1, v2 = _views(y1, y2, n_obs)
    x, y = _co_observed_keys(v1, v2)
    n = len(x)
    if n < 2:
        raise ValueError("kendall_tau needs at least 2 co-observed rows")
    total = n * (n - 1) // 2
    tied_x = _tied_pairs(x)
    tied_y = _tied_pairs(y)
    if tied_x == total or tied_y == total:
        return 0.0
    tied_xy = _tied_pairs(x, y)
    order = np.lexsort((y, x))
    y_rank = np.unique(y, return_inverse=True)[1].ravel()[order]
    discordant = _count_inversions(y_rank)
    con_minus_dis = total - tied_x - tied_y + tied_xy - 2 * discordant
    tau = con_minus_dis / math.sqrt((total - tied_x) * (total - tied_y))
    return min(1.0, max(-1.0, tau))


METRICS: dict[str, Callable] = {
    "sim_co": sim_co,
    "sim_or": sim_or,
    "jaccard": jaccard,
    "pearson": pearson,
    "kendall": kendall_tau,
}


def get_metric(name: str) -> Callable:
    try:
        return METRICS[name]
    except KeyError:
        raise ValueError(f"unknown metric {name!r}; choose from {', '.join(METRIC_NAMES)}") from None


@dataclass(frozen=True)
class SimilarityMatrix:
    variable_ids: tuple
    scores: np.ndarray
    metric_tag: str

    @property
    def order(self) -> int:
        return len(self.variable_ids)

    def score(self, a, b) -> float:
        i, j = self.variable_ids.index(a), self.variable_ids.index(b)
        return float(self.scores[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + [str(v) for v in self.variable_ids])
        for var, row in zip(self.variable_ids, self.scores):
            writer.writerow([str(var)] + [format(float(x), ".17g") for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, metric_tag: str = "") -> "SimilarityMatrix":
        rows = list(csv.reader(io.StringIO(text)))
        ids = tuple(_maybe_int(v) for v in rows[0][1:])
        scores = np.array([[float(x) for x in r[1:]] for r in rows[1:]], dtype=float)
        if scores.shape != (len(ids), len(ids)):
            raise ValueError("matrix CSV is not square")
        return cls(ids, scores, metric_tag)


def _maybe_int(s: str):
    return int(s) if s.lstrip("-").isdigit() else s


def build_matrix(d: Dataset, metric: str = "sim_co") -> SimilarityMatrix:
    """Evaluate ``metric`` on every unordered pair of variables of ``d``."""
    fn = get_metric(metric)
    ids = d.variables
    if len(ids) < 2:
        raise ValueError("need at least 2 variables to build a similarity matrix")
    views = [VariableView.from_dataset(d, v) for v in ids]
    m = len(ids)
    scores = np.zeros((m, m), dtype=float)
    for i in range(m):
        for j in range(i, m):
            try:
                s = fn(views[i], views[j], d.n_obs)
            except (ValueError, TypeError) as exc:
                if i == j:
                    s = float("nan")
                else:
                    raise MetricError(f"{metric} failed on pair ({ids[i]!r}, {ids[j]!r}): {exc}") from exc
            scores[i, j] = scores[j, i] = s
    scores.setflags(write=False)
    return SimilarityMatrix(tuple(ids), scores, metric)

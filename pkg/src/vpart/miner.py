"""
Frequent constant-coherence pattern mining.

A pattern is a set of ``(variable, value)`` items, at most one per variable,
together with the exact set of observations holding all of them. Tidsets
are kept as integer bitsets (bit ``k`` set when observation ``k`` supports
the pattern); :attr:`Pattern.tidset` gives the sorted id array.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .dataset import Dataset, ids_to_mask, mask_to_ids


def min_support_count(min_sup: float, n_obs: int) -> int:
    """Smallest absolute support meeting the fractional threshold ``min_sup``.

    A pattern qualifies iff ``support >= ceil(min_sup * n_obs)``. Shared by
    mining and merging so both apply the same boundary.
    """
    if not 0 < min_sup <= 1:
        raise ValueError(f"min_sup must lie in (0, 1], got {min_sup!r}")
    # round first so that e.g. 0.3 * 10 does not ceil to 4
    return max(1, math.ceil(round(min_sup * n_obs, 9)))


@dataclass(frozen=True)
class Pattern:
    items: tuple
    mask: int

    @classmethod
    def from_tidset(cls, items: Iterable, tidset: Iterable[int]) -> "Pattern":
        ids = np.asarray(sorted(set(int(t) for t in tidset)), dtype=np.int64)
        n = int(ids[-1]) + 1 if len(ids) else 0
        return cls(tuple(sorted(items)), ids_to_mask(ids, n))

    @cached_property
    def tidset(self) -> np.ndarray:
        return mask_to_ids(self.mask)

    @property
    def support(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def variables(self) -> frozenset:
        return frozenset(var for var, _ in self.items)

    @cached_property
    def itemset(self) -> frozenset:
        return frozenset(self.items)

    def __len__(self):
        return len(self.items)

    def format(self) -> str:
        lhs = ",".join(f"{var}={value}" for var, value in self.items)
        return lhs + "\t" + " ".join(str(t) for t in self.tidset)

    def __repr__(self):
        return f"Pattern({dict(self.items)!r}, support={self.support})"


def _parse_var(s: str):
    return int(s) if s.isdigit() else s


def parse_pattern(line: str) -> Pattern:
    lhs, _, rhs = line.rstrip("\n").partition("\t")
    items = []
    for tok in lhs.split(","):
        var, sep, value = tok.partition("=")
        if not sep:
            raise ValueError(f"malformed item {tok!r}")
        items.append((_parse_var(var), value))
    return Pattern.from_tidset(items, (int(t) for t in rhs.split()))


@dataclass
class PatternSet:
    patterns: list = field(default_factory=list)
    min_sup: float = 1.0
    source: str = "full"

    def __len__(self):
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def keys(self) -> set:
        """``{(items, mask)}``: the set view used for equality checks."""
        return {(p.items, p.mask) for p in self.patterns}

    def sorted(self) -> "PatternSet":
        return PatternSet(sorted(self.patterns, key=lambda p: p.items), self.min_sup, self.source)

    def to_text(self) -> str:
        return "".join(p.format() + "\n" for p in self.sorted())

    @classmethod
    def from_text(cls, text: str, min_sup: float = 1.0, source: str = "full") -> "PatternSet":
        pats = [parse_pattern(ln) for ln in text.splitlines() if ln.strip()]
        return cls(pats, min_sup, source)


def apriori(d: Dataset, variables: Iterable | None = None, min_sup: float = 0.1,
            source: str = "full") -> PatternSet:
    """All frequent patterns over ``variables`` with their exact tidsets.

    Level-wise search: candidates of length k+1 join two frequent length-k
    patterns sharing their first k-1 items, and are kept only if every
    length-k subset is frequent.
    """
    k_min = min_support_count(min_sup, d.n_obs)
    variables = d.variables if variables is None else list(variables)
    unknown = set(variables).difference(d.variables)
    if unknown:
        raise ValueError(f"unknown variable(s): {sorted(unknown, key=str)}")

    level = []
    for var in sorted(set(variables)):
        for value in sorted(d.values(var)):
            m = d.mask(var, value)
            if m.bit_count() >= k_min:
                level.append((((var, value),), m))
    found = list(level)

    while level:
        frequent = {items for items, _ in level}
        nxt = []
        start = 0
        while start < len(level):
            prefix = level[start][0][:-1]
            stop = start + 1
            while stop < len(level) and level[stop][0][:-1] == prefix:
                stop += 1
            for a in range(start, stop):
                items_a, mask_a = level[a]
                var_a = items_a[-1][0]
                for b in range(a + 1, stop):
                    items_b, mask_b = level[b]
                    last = items_b[-1]
                    if last[0] == var_a:
                        continue
                    cand = items_a + (last,)
                    if any(cand[:x] + cand[x + 1:] not in frequent for x in range(len(cand) - 2)):
                        continue
                    m = mask_a & mask_b
                    if m.bit_count() >= k_min:
                        nxt.append((cand, m))
            start = stop
        level = nxt
        found.extend(level)

    return PatternSet([Pattern(items, m) for items, m in found], min_sup, source)


def is_dominated(p: Pattern, q: Pattern) -> bool:
    """True iff ``q`` strictly extends ``p`` with the very same observations."""
    return len(q.items) > len(p.items) and q.mask == p.mask and p.itemset < q.itemset


def closed_filter(ps: PatternSet) -> PatternSet:
    """Keep the patterns no other pattern in ``ps`` dominates."""
    unique: dict = {}
    for p in ps:
        unique.setdefault(p.items, p)
    by_mask = defaultdict(list)
    for p in unique.values():
        by_mask[p.mask].append(p)
    kept = [
        p
        for group in by_mask.values()
        for p in group
        if not any(is_dominated(p, q) for q in group)
    ]
    kept.sort(key=lambda p: p.items)
    return PatternSet(kept, ps.min_sup, ps.source)


def mine_closed_oracle(d: Dataset, variables: Iterable | None = None, min_sup: float = 0.1) -> PatternSet:
    """Closed frequent patterns mined directly on the unpartitioned variables."""
    return closed_filter(apriori(d, variables, min_sup, source="full"))

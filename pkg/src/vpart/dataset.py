"""
Vertical (tidset) datasets.

A :class:`Dataset` is an immutable categorical matrix stored column-wise:
for every variable and each of its values, the sorted list of observations
holding that value. Missing cells belong to no list.

Two text formats are supported:

* FIMI ``.dat`` transaction files. Every item becomes a binary variable whose
  only value is ``"present"``; an absent item is a missing cell.
* CSV with a header row and a configurable missing marker.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.special import gammaln

PRESENT = "present"


class DataError(ValueError):
    """Malformed input data or an invalid request against a dataset."""


def ids_to_mask(ids: np.ndarray, n_obs: int) -> int:
    """Encode sorted observation ids as an integer bitset (bit k = obs k)."""
    if len(ids) == 0:
        return 0
    bits = np.zeros(n_obs, dtype=bool)
    bits[ids] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def mask_to_ids(mask: int) -> np.ndarray:
    """Inverse of :func:`ids_to_mask`; returns an ascending int64 array."""
    if mask == 0:
        return np.empty(0, dtype=np.int64)
    raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")).astype(np.int64)


@dataclass(frozen=True)
class DatasetStats:
    n_obs: int
    n_vars: int
    missing_fraction: float


class Dataset:
    """Immutable categorical dataset in vertical form.

    Parameters
    ----------
    n_obs : int
        Number of observations. Observation ids are ``0 .. n_obs - 1``.
    index : mapping
        ``{variable: {value: sorted observation ids}}``. Variable order is
        preserved; value labels are interned per variable.
    name : str
        Free-text label, e.g. the source file name.
    """

    def __init__(self, n_obs: int, index: Mapping[Hashable, Mapping[str, Sequence[int]]], name: str = ""):
        self.n_obs = int(n_obs)
        self.name = name
        self._values: dict[Hashable, tuple[str, ...]] = {}
        self._tids: dict[Hashable, tuple[np.ndarray, ...]] = {}
        for var, by_value in index.items():
            labels = tuple(str(v) for v in by_value)
            arrays = []
            for ids in by_value.values():
                arr = np.asarray(ids, dtype=np.int64)
                arr.setflags(write=False)
                arrays.append(arr)
            self._values[var] = labels
            self._tids[var] = tuple(arrays)
        self.variables: tuple = tuple(self._values)
        self._masks: dict[tuple, int] = {}
        self._check()

    def _check(self):
        for var in self.variables:
            seen = 0
            for arr in self._tids[var]:
                if len(arr) and (arr[0] < 0 or arr[-1] >= self.n_obs):
                    raise DataError(f"variable {var!r}: observation id out of range")
                if len(arr) > 1 and not np.all(np.diff(arr) > 0):
                    raise DataError(f"variable {var!r}: tidset not strictly ascending")
                seen += len(arr)
            if seen > self.n_obs:
                raise DataError(f"variable {var!r}: more cells than observations")
            if seen and len(np.unique(np.concatenate(self._tids[var]))) != seen:
                raise DataError(f"variable {var!r}: one observation holds two values")

    # -- access ----------------------------------------------------------

    def values(self, var) -> tuple[str, ...]:
        return self._values[var]

    def tidset(self, var, value: str) -> np.ndarray:
        try:
            code = self._values[var].index(value)
        except (KeyError, ValueError):
            return np.empty(0, dtype=np.int64)
        return self._tids[var][code]

    def items(self):
        """Yield ``(variable, value, tidset)`` for every non-empty item."""
        for var in self.variables:
            for value, ids in zip(self._values[var], self._tids[var]):
                yield var, value, ids

    def mask(self, var, value: str) -> int:
        """Bitset of the observations holding ``value`` in ``var``."""
        key = (var, value)
        m = self._masks.get(key)
        if m is None:
            m = ids_to_mask(self.tidset(var, value), self.n_obs)
            self._masks[key] = m
        return m

    def codes(self, var) -> np.ndarray:
        """Integer value codes of one column; -1 marks a missing cell."""
        out = np.full(self.n_obs, -1, dtype=np.int64)
        for code, ids in enumerate(self._tids[var]):
            out[ids] = code
        return out

    def column(self, var) -> list:
        """The column as a list of value labels with ``None`` for missing."""
        labels = self._values[var]
        return [None if c < 0 else labels[c] for c in self.codes(var)]

    def n_cells(self) -> int:
        return sum(len(a) for arrays in self._tids.values() for a in arrays)

    # -- comparisons -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        if self.n_obs != other.n_obs or self.variables != other.variables:
            return False
        for var in self.variables:
            if self._values[var] != other._values[var]:
                return False
            if any(not np.array_equal(a, b) for a, b in zip(self._tids[var], other._tids[var])):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        return f"Dataset(name={self.name!r}, n_obs={self.n_obs}, n_vars={len(self.variables)})"


# -- parsers -------------------------------------------------------------


def _as_text(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    if isinstance(data, str):
        return data
    raw = data.read()
    return raw.decode("utf-8") if isinstance(raw, bytes) else raw


def parse_fimi(data, name: str = "") -> Dataset:
    """Parse a FIMI transaction file (bytes, str or binary file object).

    Each non-empty line is one observation; each item id becomes a binary
    variable with the single value ``"present"``.

    >>> d = parse_fimi(b"1 2\\n2 3\\n")
    >>> d.n_obs, d.variables
    (2, (1, 2, 3))
    >>> d.tidset(2, "present").tolist()
    [0, 1]
    """
    rows, items = [], []
    for lineno, line in enumerate(_as_text(data).splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        try:
            parsed = [int(t) for t in tokens]
        except ValueError:
            bad = next(t for t in tokens if not t.isdigit())
            raise DataError(f"line {lineno}: non-integer token {bad!r}") from None
        if any(v < 0 for v in parsed):
            raise DataError(f"line {lineno}: negative item id")
        items.extend(parsed)
        rows.append(len(parsed))
    if not rows:
        raise DataError("no observations")
    item_arr = np.asarray(items, dtype=np.int64)
    obs_arr = np.repeat(np.arange(len(rows), dtype=np.int64), rows)
    order = np.lexsort((obs_arr, item_arr))
    item_arr, obs_arr = item_arr[order], obs_arr[order]
    # an item repeated on one line is the same cell
    keep = np.ones(len(item_arr), dtype=bool)
    keep[1:] = (item_arr[1:] != item_arr[:-1]) | (obs_arr[1:] != obs_arr[:-1])
    item_arr, obs_arr = item_arr[keep], obs_arr[keep]
    uniq, starts = np.unique(item_arr, return_index=True)
    bounds = list(starts) + [len(item_arr)]
    index = {int(v): {PRESENT: obs_arr[bounds[i]:bounds[i + 1]]} for i, v in enumerate(uniq)}
    return Dataset(len(rows), index, name=name)


def parse_csv(data, missing_marker: str = "NaN", name: str = "") -> Dataset:
    """Parse comma-separated categorical data with a header row.

    Cells equal to ``missing_marker`` (case-sensitive) are missing; every
    other cell is taken verbatim as a categorical value. Quoting is not
    supported.
    """
    lines = [ln.rstrip("\r") for ln in _as_text(data).split("\n")]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise DataError("empty CSV input")
    header = lines[0].split(",")
    if len(set(header)) != len(header):
        dup = next(h for h in header if header.count(h) > 1)
        raise DataError(f"duplicate header name {dup!r}")
    index: dict[str, dict[str, list[int]]] = {h: {} for h in header}
    n_obs = 0
    for row_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise DataError(f"row {row_no}: expected {len(header)} cells, got {len(cells)}")
        for var, cell in zip(header, cells):
            if cell != missing_marker:
                index[var].setdefault(cell, []).append(n_obs)
        n_obs += 1
    if n_obs == 0:
        raise DataError("no observations")
    return Dataset(n_obs, index, name=name)


def load(path, fmt: str | None = None, missing_marker: str = "NaN") -> Dataset:
    """Load a dataset from disk; the format defaults from the file extension."""
    path = os.fspath(path)
    if fmt is None:
        fmt = "csv" if path.lower().endswith(".csv") else "fimi"
    with open(path, "rb") as fh:
        raw = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    if fmt == "fimi":
        return parse_fimi(raw, name=name)
    if fmt == "csv":
        return parse_csv(raw, missing_marker=missing_marker, name=name)
    raise ValueError(f"unknown format {fmt!r}")


# -- derived datasets and statistics ----------------------------------------


def stats(d: Dataset) -> DatasetStats:
    n_vars = len(d.variables)
    total = d.n_obs * n_vars
    missing = 0.0 if total == 0 else 1.0 - d.n_cells() / total
    return DatasetStats(d.n_obs, n_vars, missing)


def project(d: Dataset, variables: Iterable) -> Dataset:
    """Restrict ``d`` to a subset of its variables.

    Observation ids are kept as they are, so tidsets from different
    projections of the same dataset remain comparable.
    """
    wanted = set(variables)
    unknown = wanted.difference(d.variables)
    if unknown:
        raise DataError(f"unknown variable(s): {sorted(unknown, key=str)}")
    index = {
        var: dict(zip(d._values[var], d._tids[var]))
        for var in d.variables
        if var in wanted
    }
    return Dataset(d.n_obs, index, name=d.name)


def _binomial_log_tail(n: int, p: float) -> np.ndarray:
    """``log P(Bin(n, p) >= k)`` for ``k = 0 .. n``."""
    k = np.arange(n + 1)
    log_pmf = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    log_pmf = log_pmf + k * math.log(p) + (n - k) * math.log1p(-p)
    return np.logaddexp.accumulate(log_pmf[::-1])[::-1]


def min_significant_support(d_or_stats, pattern_len: int = 4, alpha: float = 0.05) -> float:
    """Smallest support fraction at which a pattern is significant.

    Under the null model every cell is present with probability equal to the
    dataset density (``1 - missing_fraction``), independently across
    variables, so a pattern over ``pattern_len`` variables covers an
    observation with ``p = density ** pattern_len``. Returns ``K / N`` for
    the smallest count ``K`` with ``P(Bin(N, p) >= K) < alpha``, or ``1.0``
    when no count reaches significance.

    Accepts a :class:`Dataset` or a :class:`DatasetStats`.
    """
    if pattern_len < 1:
        raise ValueError("pattern_len must be >= 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    st = d_or_stats if isinstance(d_or_stats, DatasetStats) else stats(d_or_stats)
    n = st.n_obs
    if n <= 0:
        raise DataError("dataset has no observations")
    p = (1.0 - st.missing_fraction) ** pattern_len
    if p <= 0.0:
        # nothing is expected under the null; a single hit is already rare
        return 1 / n
    if p >= 1.0:
        return 1.0
    log_tail = _binomial_log_tail(n, p)
    hits = np.flatnonzero(log_tail < math.log(alpha))
    if len(hits) == 0:
        return 1.0
    return int(hits[0]) / n


__all__ = [
    "PRESENT",
    "DataError",
    "Dataset",
    "DatasetStats",
    "parse_fimi",
    "parse_csv",
    "load",
    "stats",
    "project",
    "min_significant_support",
    "ids_to_mask",
    "mask_to_ids",
]

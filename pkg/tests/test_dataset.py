import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import binom

from vpart import DataError, Dataset, min_significant_support, parse_csv, parse_fimi, project, stats
from vpart.dataset import DatasetStats, ids_to_mask, mask_to_ids


def test_parse_fimi_small():
    d = parse_fimi(b"1 2\n2 3\n")
    assert d.n_obs == 2
    assert d.variables == (1, 2, 3)
    assert d.tidset(1, "present").tolist() == [0]
    assert d.tidset(2, "present").tolist() == [0, 1]
    assert d.tidset(3, "present").tolist() == [1]


def test_parse_fimi_whitespace_and_blank_lines():
    d = parse_fimi("3\t1  \n\n1 \n")
    assert d.n_obs == 2
    assert d.tidset(1, "present").tolist() == [0, 1]
    assert d.tidset(3, "present").tolist() == [0]


def test_parse_fimi_accepts_file_objects():
    assert parse_fimi(io.BytesIO(b"1 2\n2 3")) == parse_fimi(b"1 2\n2 3\n")


def test_parse_fimi_empty():
    with pytest.raises(DataError, match="no observations"):
        parse_fimi(b"")
    with pytest.raises(DataError, match="no observations"):
        parse_fimi(b"\n  \n")


def test_parse_fimi_bad_token_reports_line():
    with pytest.raises(DataError, match="line 3"):
        parse_fimi(b"1 2\n\n2 x\n")


def test_parse_csv_missing_marker():
    d = parse_csv("a,b\n1,x\nNaN,x\n")
    assert d.tidset("a", "1").tolist() == [0]
    assert d.tidset("b", "x").tolist() == [0, 1]
    assert d.column("a") == ["1", None]


def test_parse_csv_repeated_values():
    d = parse_csv("a\n1\n1\n2\n")
    assert d.tidset("a", "1").tolist() == [0, 1]
    assert d.tidset("a", "2").tolist() == [2]


def test_parse_csv_marker_is_case_sensitive():
    d = parse_csv("a\nnan\nNaN\n")
    assert d.tidset("a", "nan").tolist() == [0]
    assert d.column("a") == ["nan", None]


def test_parse_csv_custom_marker():
    d = parse_csv("a\n?\n1\n", missing_marker="?")
    assert d.column("a") == [None, "1"]


def test_parse_csv_ragged_row():
    with pytest.raises(DataError, match="row 3"):
        parse_csv("a,b\n1,2\n1,2,3\n")


def test_parse_csv_duplicate_header():
    with pytest.raises(DataError, match="duplicate"):
        parse_csv("a,a\n1,2\n")


def test_stats_full_matrix():
    d = parse_csv("a,b\n1,2\n3,4\n")
    assert stats(d) == DatasetStats(2, 2, 0.0)


def test_stats_counts_missing():
    d = parse_fimi(b"1 2\n2 3\n")
    assert stats(d).missing_fraction == pytest.approx(1 - 4 / 6)


def test_project_identity_and_empty():
    d = parse_fimi(b"1 2\n2 3\n1\n")
    assert project(d, d.variables) == d
    empty = project(d, [])
    assert empty.variables == ()
    assert empty.n_obs == 3


def test_project_keeps_observation_ids():
    d = parse_fimi(b"1\n2\n1 2\n")
    p = project(d, [2])
    assert p.tidset(2, "present").tolist() == [1, 2]


def test_project_unknown_variable():
    with pytest.raises(DataError):
        project(parse_fimi(b"1\n"), [7])


def test_dataset_rejects_conflicting_cells():
    with pytest.raises(DataError):
        Dataset(3, {"a": {"x": [0, 1], "y": [1]}})
    with pytest.raises(DataError):
        Dataset(2, {"a": {"x": [0, 2]}})


def test_mask_roundtrip():
    ids = np.array([0, 3, 64, 65, 200])
    assert mask_to_ids(ids_to_mask(ids, 201)).tolist() == ids.tolist()
    assert mask_to_ids(0).tolist() == []


transactions = st.lists(
    st.lists(st.integers(0, 30), min_size=1, max_size=8, unique=True), min_size=1, max_size=25
)


def _fimi_bytes(rows):
    return "".join(" ".join(map(str, r)) + "\n" for r in rows).encode()


@given(transactions)
def test_fimi_cell_count_equals_token_count(rows):
    d = parse_fimi(_fimi_bytes(rows))
    assert d.n_cells() == sum(len(r) for r in rows)


@given(transactions)
def test_fimi_invariants(rows):
    d = parse_fimi(_fimi_bytes(rows))
    assert d.n_obs == len(rows)
    for _, _, ids in d.items():
        assert np.all(np.diff(ids) > 0)
        assert ids.min() >= 0 and ids.max() < d.n_obs
    assert stats(project(d, d.variables)) == stats(d)
    assert parse_fimi(_fimi_bytes(rows)) == d


# -- significance-derived minimum support --------------------------------


def _oracle_min_support(n, missing, length, alpha):
    p = (1 - missing) ** length
    for k in range(n + 1):
        if binom.sf(k - 1, n, p) < alpha:
            return k / n
    return 1.0


@pytest.mark.parametrize(
    "n,missing,length,alpha",
    [(3196, 1 - 37 / 75, 4, 0.05), (500, 0.3, 2, 0.01), (1000, 0.8, 4, 0.05), (80, 0.1, 3, 0.2)],
)
def test_min_significant_support_matches_binomial_oracle(n, missing, length, alpha):
    got = min_significant_support(DatasetStats(n, 10, missing), length, alpha)
    assert got == pytest.approx(_oracle_min_support(n, missing, length, alpha), abs=0.5 / n)


def test_min_significant_support_saturated_null():
    assert min_significant_support(DatasetStats(50, 3, 0.0), 1, 0.05) == 1.0


def test_min_significant_support_table_bounds():
    chess = min_significant_support(DatasetStats(3196, 75, 0.50), 4, 0.05)
    assert 0.05 < chess <= 0.10
    assert min_significant_support(DatasetStats(340183, 468, 0.93), 4, 0.05) < 0.01
    assert min_significant_support(DatasetStats(49046, 2113, 0.96), 4, 0.05) < 0.01


def test_min_significant_support_errors():
    with pytest.raises(DataError):
        min_significant_support(DatasetStats(0, 1, 0.5), 4, 0.05)
    with pytest.raises(ValueError):
        min_significant_support(DatasetStats(10, 1, 0.5), 0, 0.05)
    with pytest.raises(ValueError):
        min_significant_support(DatasetStats(10, 1, 0.5), 2, 1.0)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 400),
    missing=st.floats(0.0, 0.95),
    length=st.integers(1, 5),
    alpha=st.floats(0.001, 0.5),
)
def test_min_significant_support_monotone(n, missing, length, alpha):
    s = DatasetStats(n, 5, missing)
    base = min_significant_support(s, length, alpha)
    assert 0 < base <= 1
    assert min_significant_support(s, length + 1, alpha) <= base
    assert min_significant_support(s, length, min(alpha * 2, 0.99)) <= base

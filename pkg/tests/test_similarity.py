import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import kendall_reference, sim_co_reference
from vpart import build_matrix, jaccard, kendall_tau, parse_csv, parse_fimi, pearson, project, sim_co, sim_or
from vpart.similarity import (
    MetricError,
    SimilarityMatrix,
    VariableView,
    _count_inversions,
    pair_distribution,
    sim_co_factors,
)


# -- sim_co ---------------------------------------------------------------


def test_sim_co_single_pair_is_one():
    assert sim_co(list("aaaa"), list("bbbb")) == 1.0


def test_sim_co_all_distinct_is_zero():
    assert sim_co([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(0.0, abs=1e-15)


def test_sim_co_two_blocks_is_half():
    assert sim_co(list("aabb"), list("ccdd")) == pytest.approx(0.5, abs=1e-15)


def test_sim_co_no_co_observed_rows():
    assert sim_co(["a", None, "a"], [None, "b", None]) == 0.0


def test_sim_co_mismatched_lengths():
    with pytest.raises(ValueError):
        sim_co([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        sim_co([1, 2], [1, 2], n_obs=3)


def test_sim_co_binary_reduces_to_containment():
    # one co-observed pair, confidence = |T1 & T2| / max(|T1|, |T2|)
    y1 = ["p", "p", "p", None, None, "p"]
    y2 = ["p", "p", None, "p", None, None]
    f1, f2 = sim_co_factors(y1, y2)
    assert f1 == pytest.approx(2 / 4)
    assert f2 == pytest.approx(1 + (2 / 6) * math.log(2 / 6) / math.log(6))


def test_pair_distribution_counts():
    pd_ = pair_distribution(["a", "a", "b", None], ["x", "y", "y", "y"])
    assert pd_.co_obs == 3
    assert pd_.pair_counts == {("a", "x"): 1, ("a", "y"): 1, ("b", "y"): 1}
    assert pd_.marginal2 == {"x": 1, "y": 3}


cat_values = st.one_of(st.none(), st.sampled_from("abcd"))


@st.composite
def categorical_pairs(draw, values=cat_values):
    n = draw(st.integers(1, 20))
    y1 = draw(st.lists(values, min_size=n, max_size=n))
    y2 = draw(st.lists(values, min_size=n, max_size=n))
    return y1, y2


@given(categorical_pairs())
def test_sim_co_matches_reference(pair):
    y1, y2 = pair
    assert sim_co(y1, y2) == pytest.approx(sim_co_reference(y1, y2), abs=1e-12)


@given(categorical_pairs())
def test_sim_co_factor_bounds(pair):
    f1, f2 = sim_co_factors(*pair)
    assert -1e-12 <= f1 <= 1 + 1e-12
    assert -1e-12 <= f2 <= 1 + 1e-12


@given(categorical_pairs())
def test_sim_co_log_base_invariance(pair):
    natural = sim_co(*pair)
    assert sim_co(*pair, base=2) == pytest.approx(natural, abs=1e-12)
    assert sim_co(*pair, base=10) == pytest.approx(natural, abs=1e-12)


# -- sim_or ---------------------------------------------------------------


def test_sim_or_total_order():
    assert sim_or([1, 2, 3], [2, 3, 4]) == 1.0


def test_sim_or_reversed():
    assert sim_or([1, 2, 3], [3, 2, 1]) == pytest.approx(1 / 3)


def test_sim_or_all_ties():
    assert sim_or([1, 2, 3], [1, 2, 3]) == 0.0


def test_sim_or_divides_by_all_observations():
    assert sim_or([1, 2, None, 5], [2, 3, 4, None]) == pytest.approx(2 / 4)


def test_sim_or_strings_compare_lexicographically():
    assert sim_or(["a", "b"], ["b", "c"]) == 1.0
    # numeric strings are compared as numbers
    assert sim_or(["9", "10"], ["10", "11"]) == 1.0


def test_sim_or_incomparable():
    with pytest.raises(TypeError):
        sim_or([1, "a"], [2, 3])


@given(categorical_pairs(st.one_of(st.none(), st.integers(0, 4))), st.data())
def test_sim_or_ties_never_increase(pair, data):
    y1, y2 = pair
    rows = [i for i in range(len(y1)) if y1[i] is not None and y2[i] is not None]
    if not rows:
        return
    i = data.draw(st.sampled_from(rows))
    tied = list(y2)
    tied[i] = y1[i]
    assert sim_or(y1, tied) <= sim_or(y1, y2)


# -- jaccard ----------------------------------------------------------------


def test_jaccard_basic():
    assert jaccard(["p", "p", None], [None, "p", "p"]) == pytest.approx(1 / 3)


def test_jaccard_identity_and_empty():
    assert jaccard(["p", None], ["p", None]) == 1.0
    assert jaccard([None, None], [None, None]) == 0.0


# -- pearson ------------------------------------------------------------------


def test_pearson_additive_pattern_scores_zero():
    assert pearson([1, 2, 3, 4, 5, 6], [2, 3, 4, 4, 3, 2]) == pytest.approx(0.0, abs=1e-12)


def test_pearson_linear():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0, abs=1e-12)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)


def test_pearson_constant_is_zero():
    assert pearson([1, 1, 1], [1, 2, 3]) == 0.0


def test_pearson_needs_two_rows():
    with pytest.raises(ValueError):
        pearson([1, None], [2, 3])


def test_pearson_against_numpy():
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=50), rng.normal(size=50)
    assert pearson(x.tolist(), y.tolist()) == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-12)


# -- kendall ------------------------------------------------------------------


def test_kendall_examples():
    assert kendall_tau([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
    assert kendall_tau([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert kendall_tau([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(4 / 6)


def test_kendall_all_tied():
    assert kendall_tau([1, 1, 1], [1, 2, 3]) == 0.0


@given(categorical_pairs(st.one_of(st.none(), st.integers(0, 5))))
def test_kendall_matches_pairwise_reference(pair):
    y1, y2 = pair
    if sum(a is not None and b is not None for a, b in zip(y1, y2)) < 2:
        return
    assert kendall_tau(y1, y2) == pytest.approx(kendall_reference(y1, y2), abs=1e-12)


@given(st.lists(st.integers(0, 6), max_size=60))
def test_count_inversions(a):
    brute = sum(1 for i in range(len(a)) for j in range(i + 1, len(a)) if a[i] > a[j])
    assert _count_inversions(np.array(a, dtype=np.int64)) == brute


# -- matrix -------------------------------------------------------------------


def test_build_matrix_two_variables():
    d = parse_csv("a,b\nx,u\nx,u\ny,v\n")
    m = build_matrix(d, "sim_co")
    assert m.scores.shape == (2, 2)
    assert m.score("a", "b") == m.score("b", "a") == pytest.approx(sim_co(d.column("a"), d.column("b")))


def test_build_matrix_entries_match_metric():
    d = parse_fimi(b"1 2 3\n1 3\n2 4\n1 2 4\n3\n")
    for metric, fn in [("sim_co", sim_co), ("jaccard", jaccard), ("sim_or", sim_or)]:
        m = build_matrix(d, metric)
        for a in d.variables:
            for b in d.variables:
                if a != b:
                    assert m.score(a, b) == fn(d.column(a), d.column(b))


def test_build_matrix_chess_projection(chess):
    d = project(chess, chess.variables[10:14])
    m = build_matrix(d, "sim_co")
    assert m.order == 4
    assert np.all((m.scores >= 0) & (m.scores <= 1))
    assert np.array_equal(m.scores, m.scores.T)


def test_build_matrix_reports_failing_pair():
    d = parse_csv("a,b\nx,1\ny,2\n")
    with pytest.raises(MetricError, match="'a'"):
        build_matrix(d, "pearson")


def test_build_matrix_needs_two_variables():
    with pytest.raises(ValueError):
        build_matrix(parse_fimi(b"1\n"), "sim_co")


def test_matrix_csv_roundtrip():
    d = parse_fimi(b"1 2 3\n1 3\n2 4\n1 2 4\n")
    m = build_matrix(d, "sim_co")
    text = m.to_csv()
    back = SimilarityMatrix.from_csv(text, "sim_co")
    assert back.variable_ids == m.variable_ids
    assert np.array_equal(back.scores, m.scores)
    assert text.splitlines()[0] == ",1,2,3,4"


def test_variable_view_encoding():
    v = VariableView.of(["a", None, "b", "a", float("nan")])
    assert v.codes.tolist() == [0, -1, 1, 0, -1]
    assert v.labels == ("a", "b")


@settings(max_examples=50)
@given(categorical_pairs(), st.randoms(use_true_random=False))
def test_permutation_invariance(pair, rnd):
    y1, y2 = pair
    perm = list(range(len(y1)))
    rnd.shuffle(perm)
    p1, p2 = [y1[i] for i in perm], [y2[i] for i in perm]
    for fn in (sim_co, sim_or, jaccard):
        assert fn(y1, y2) == fn(p1, p2)

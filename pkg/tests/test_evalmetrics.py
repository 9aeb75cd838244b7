"""Retrieval metrics against hand-computed values."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdsfuse.evalmetrics import aggregate, average_precision, ns_score


def test_average_precision_ranks_one_and_three():
    # relevant items at ranks 1 and 3: (1/1 + 2/3) / 2 = 5/6
    ranking = [10, 11, 12, 13]
    assert average_precision(ranking, {10, 12}) == pytest.approx(5 / 6)


def test_average_precision_perfect_and_empty_tail():
    assert average_precision([1, 2, 9, 8], {1, 2}) == 1.0
    # a relevant item never retrieved contributes nothing
    assert average_precision([1, 9], {1, 2}) == pytest.approx(0.5)


def test_average_precision_requires_relevant():
    with pytest.raises(ValueError):
        average_precision([1, 2], set())


def test_ns_score_three_of_four():
    # query 0 at rank 1, two more group members in the top 4
    assert ns_score([0, 1, 9, 2, 8], {0, 1, 2, 3}) == 3.0


def test_ns_score_range():
    assert ns_score([0, 1, 2, 3], {0, 1, 2, 3}) == 4.0
    assert ns_score([9, 8, 7, 6], {0, 1, 2, 3}) == 0.0
    with pytest.raises(ValueError):
        ns_score([0], {0, 1})


def test_aggregate_mean():
    report = aggregate({0: 1.0, 4: 0.5}, "map")
    assert report.mean == pytest.approx(0.75)
    assert report.query_count == 2
    with pytest.raises(ValueError):
        aggregate({}, "map")


@settings(max_examples=50, deadline=None)
@given(st.permutations(list(range(8))), st.sets(st.integers(0, 7), min_size=1, max_size=8))
def test_average_precision_bounds(ranking, relevant):
    ap = average_precision(ranking, relevant)
    assert 0.0 <= ap <= 1.0
    # a full permutation retrieves everything, so AP is positive
    assert ap > 0.0

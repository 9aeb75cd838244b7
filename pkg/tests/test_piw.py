"""Feature reliability weights from cross-feature agreement."""

import numpy as np
import pytest

from cdsfuse.cds import ConstrainedCluster
from cdsfuse.piw import (PROFILE_DECAY, PiwVector, compute_piw,
                         concentration_score, consensus_mass)


def _cluster(query, members, scores, inlier_members=None):
    """Build a cluster with the query at membership position 0."""
    node_ids = [query] + list(members)
    x = np.array([0.5] + list(scores))
    x = x / x.sum()
    if inlier_members is None:
        inlier_members = list(members)
    return ConstrainedCluster(
        query=query, node_ids=node_ids, membership=x, zeta=0.0,
        support=node_ids, inliers=[query] + list(inlier_members),
        outliers=[m for m in members if m not in inlier_members],
    )


def test_concentration_top3_fraction():
    mem = {1: 0.4, 2: 0.3, 3: 0.2, 4: 0.05, 5: 0.05}
    assert concentration_score(mem) == pytest.approx(0.9)


def test_concentration_guard_small_clusters():
    assert concentration_score({}) == 0.0
    assert concentration_score({1: 1.0}) == 0.0
    assert concentration_score({1: 0.6, 2: 0.4}) == pytest.approx(1.0)


def test_consensus_mass_counts_corroborated_only():
    mem = {1: 0.3, 2: 0.2, 3: 0.1}
    retained = {1, 2}
    others = {2, 3, 9}
    # only node 2 is both retained here and seen elsewhere
    assert consensus_mass(mem, retained, others) == pytest.approx(0.2)


def test_single_feature_gets_unit_weight():
    piw = compute_piw([_cluster(0, [1, 2], [0.3, 0.2])])
    assert piw.weights == [1.0]
    assert piw.masked is None


def test_empty_cluster_list_rejected():
    with pytest.raises(ValueError):
        compute_piw([])


def test_weights_sum_to_one_and_nonnegative():
    clusters = [
        _cluster(0, [1, 2, 3], [0.3, 0.2, 0.1]),
        _cluster(0, [1, 2, 9], [0.25, 0.2, 0.1]),
        _cluster(0, [7, 8], [0.3, 0.3]),
    ]
    piw = compute_piw(clusters)
    assert sum(piw.weights) == pytest.approx(1.0)
    assert all(w >= 0.0 for w in piw.weights)


def test_uncorroborated_feature_is_masked():
    # features 0 and 1 retain overlapping members; feature 2 is off on its own
    clusters = [
        _cluster(0, [1, 2, 3, 4], [0.35, 0.3, 0.25, 0.02]),
        _cluster(0, [1, 2, 5, 6], [0.3, 0.25, 0.1, 0.05]),
        _cluster(0, [7, 8, 9, 10], [0.1, 0.1, 0.1, 0.1]),
    ]
    piw = compute_piw(clusters)
    assert piw.masked == 2
    assert piw.weights[2] == 0.0
    assert piw.weights[2] < piw.weights[1] < piw.weights[0]


def test_masked_never_the_most_concentrated():
    # feature 0 is sharply concentrated but has no consensus; it must keep
    # its weight while one of the diffuse features is masked instead
    clusters = [
        _cluster(0, [1, 2, 3, 4], [0.5, 0.3, 0.19, 0.01]),
        _cluster(0, [5, 6, 7, 8], [0.2, 0.2, 0.2, 0.2]),
        _cluster(0, [6, 7, 8, 9], [0.2, 0.2, 0.2, 0.2]),
    ]
    piw = compute_piw(clusters)
    assert piw.masked != 0
    assert piw.weights[0] > 0.0


def test_two_feature_profile():
    clusters = [
        _cluster(0, [1, 2, 3], [0.4, 0.3, 0.2]),
        _cluster(0, [1, 2, 4], [0.25, 0.2, 0.2]),
    ]
    piw = compute_piw(clusters)
    assert piw.masked is None
    expected_top = 1.0 / (1.0 + PROFILE_DECAY)
    assert max(piw.weights) == pytest.approx(expected_top)
    assert min(piw.weights) == pytest.approx(PROFILE_DECAY / (1.0 + PROFILE_DECAY))


def test_three_feature_profile_values():
    clusters = [
        _cluster(0, [1, 2, 3, 4], [0.4, 0.3, 0.2, 0.01]),
        _cluster(0, [1, 2, 5, 6], [0.25, 0.2, 0.15, 0.1]),
        _cluster(0, [7, 8, 9, 10], [0.1, 0.1, 0.1, 0.1]),
    ]
    piw = compute_piw(clusters)
    expected = [1.0 / (1.0 + PROFILE_DECAY), PROFILE_DECAY / (1.0 + PROFILE_DECAY), 0.0]
    np.testing.assert_allclose(sorted(piw.weights, reverse=True), expected)


def test_dict_roundtrip():
    clusters = [
        _cluster(0, [1, 2, 3], [0.4, 0.3, 0.2]),
        _cluster(0, [1, 2, 4], [0.25, 0.2, 0.2]),
    ]
    piw = compute_piw(clusters)
    back = PiwVector.from_dict(piw.to_dict())
    assert back == piw

"""Distance-to-similarity conversion, minimax normalization and subgraphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cdsfuse.matrixio import KIND_DISTANCE, KIND_SIMILARITY, FeatureMatrix


class DegenerateDistancesError(ValueError):
    """All off-diagonal distances are zero; no similarity scale exists."""


@dataclass
class SubgraphAffinity:
    """Query-centered subgraph: symmetric, nonnegative, zero diagonal.

    The query occupies position 0 of ``node_ids``.
    """

    node_ids: list[int]
    A: np.ndarray

    @property
    def m(self) -> int:
        return len(self.node_ids)

    @property
    def query(self) -> int:
        return self.node_ids[0]


def similarity_from_distance(dist: FeatureMatrix) -> FeatureMatrix:
    """Map distances through the Gaussian kernel exp(-(d / sigma)^2).

    sigma is the mean off-diagonal distance.  The squared exponent keeps
    near-duplicates sharply separated from the bulk of the collection, which
    the later cluster-threshold step depends on.
    """
    if dist.kind != KIND_DISTANCE:
        raise ValueError(f"expected a distance matrix, got kind={dist.kind}")
    d = dist.values
    n = dist.n
    if n > 1:
        off = d[~np.eye(n, dtype=bool)]
        sigma = off.mean()
    else:
        sigma = 0.0
    if sigma <= 0.0:
        raise DegenerateDistancesError("all off-diagonal distances are zero")
    s = np.exp(-np.square(d / sigma))
    np.fill_diagonal(s, 1.0)
    return FeatureMatrix(values=s, kind=KIND_SIMILARITY, feature_name=dist.feature_name)


def minimax_normalize(sim: FeatureMatrix) -> FeatureMatrix:
    """Rescale each column to [0,1] by its own min/max, then symmetrize.

    Constant columns map to zeros (an uninformative column contributes no
    affinity).  Column-wise scaling breaks symmetry, so the result is averaged
    with its transpose.
    """
    if sim.kind != KIND_SIMILARITY:
        raise ValueError(f"expected a similarity matrix, got kind={sim.kind}")
    v = sim.values
    lo = v.min(axis=0)
    hi = v.max(axis=0)
    span = hi - lo
    out = np.zeros_like(v)
    ok = span > 0
    out[:, ok] = (v[:, ok] - lo[ok]) / span[ok]
    out = (out + out.T) / 2.0
    return FeatureMatrix(values=out, kind=KIND_SIMILARITY, feature_name=sim.feature_name)


def build_subgraph(sim: FeatureMatrix, nodes: list[int]) -> SubgraphAffinity:
    """Restrict a similarity matrix to ``nodes`` (query first), zero diagonal."""
    n = sim.n
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate node ids in subgraph")
    for c in nodes:
        if not 0 <= c < n:
            raise ValueError(f"node id {c} out of range [0,{n})")
    A = sim.values[np.ix_(nodes, nodes)]
    A = (A + A.T) / 2.0
    np.fill_diagonal(A, 0.0)
    return SubgraphAffinity(node_ids=list(nodes), A=A)

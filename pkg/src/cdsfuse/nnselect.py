"""Ranked lists and incremental nearest-neighbor selection.

Neighbors are admitted while the ratio of consecutive ranked similarities
stays above the proximity coefficient: the top neighbor is always taken, and
admission stops at the first ratio at or below the threshold, at ``k_max``,
or at the first zero-similarity entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cdsfuse.matrixio import FeatureMatrix


@dataclass
class RankedList:
    """Items ranked by similarity to a query, query itself excluded.

    Scores are non-increasing; ties break by ascending item id.
    """

    query: int
    ids: list[int]
    scores: list[float]

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.ids, self.scores))


@dataclass
class NeighborSet:
    """A prefix of a ranked list selected as the query's neighbors."""

    query: int
    members: list[int]
    member_scores: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.members)


def rank(sim: FeatureMatrix, q: int) -> RankedList:
    """Rank all items except ``q`` by similarity to ``q``, descending."""
    n = sim.n
    if not 0 <= q < n:
        raise ValueError(f"query id {q} out of range [0,{n})")
    row = sim.values[q]
    ids = np.delete(np.arange(n), q)
    scores = row[ids]
    # lexsort's last key is primary: -score descending, id ascending on ties
    order = np.lexsort((ids, -scores))
    ids = ids[order]
    scores = scores[order]
    return RankedList(query=q, ids=ids.tolist(), scores=scores.tolist())


def incremental_knn(ranked: RankedList, npc: float, k_max: int) -> NeighborSet:
    """Select neighbors by the consecutive-similarity-ratio rule."""
    if not 0.0 <= npc < 1.0:
        raise ValueError(f"npc must be in [0,1), got {npc}")
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if not ranked.ids:
        raise ValueError("cannot select neighbors from an empty ranked list")
    members: list[int] = []
    scores: list[float] = []
    prev = None
    for item, s in zip(ranked.ids, ranked.scores):
        if s <= 0.0:
            break
        if prev is not None and s / prev <= npc:
            break
        members.append(item)
        scores.append(s)
        prev = s
        if len(members) >= k_max:
            break
    return NeighborSet(query=ranked.query, members=members, member_scores=scores)


def fixed_knn(ranked: RankedList, k: int) -> NeighborSet:
    """Plain top-k selection (incremental rule disabled); skips zero scores."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    members: list[int] = []
    scores: list[float] = []
    for item, s in zip(ranked.ids, ranked.scores):
        if s <= 0.0 or len(members) >= k:
            break
        members.append(item)
        scores.append(s)
    return NeighborSet(query=ranked.query, members=members, member_scores=scores)

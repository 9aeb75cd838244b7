"""Intersection-based voting over per-feature neighbor and cluster sets.

For z features, each phi set is the intersection of one (z-1)-subset of the
neighbor sets.  The three vote sources are the multiset union of the phi
sets, the multiset union of the cluster inlier sets, and the intersection of
all phi sets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations


@dataclass
class SuperSets:
    phi_union: Counter
    cds_union: Counter
    kappa: set


@dataclass
class VoteTally:
    """Per-candidate multiplicities and their scaled vote scores."""

    c1: int
    c2: int
    c3: int
    v1: float
    v2: float
    v3: float

    @property
    def total(self) -> float:
        return self.v1 + self.v2 + self.v3

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3,
                "v1": self.v1, "v2": self.v2, "v3": self.v3}

    @classmethod
    def from_dict(cls, d: dict) -> "VoteTally":
        return cls(**d)


def build_phi_sets(nn_sets: list[set]) -> list[set]:
    """All intersections of (z-1)-subsets of the z neighbor sets, in
    combination order (drop-last first)."""
    z = len(nn_sets)
    if z < 2:
        raise ValueError("voting needs at least two neighbor sets")
    phis = []
    for combo in combinations(range(z), z - 1):
        acc = set(nn_sets[combo[0]])
        for j in combo[1:]:
            acc &= nn_sets[j]
        phis.append(acc)
    return phis


def build_supersets(phi_sets: list[set], cds_sets: list[set]) -> SuperSets:
    """Multiset unions of the phi and cluster sets plus the phi intersection."""
    phi_union = Counter()
    for phi in phi_sets:
        phi_union.update(phi)
    cds_union = Counter()
    for cset in cds_sets:
        cds_union.update(cset)
    kappa = set(phi_sets[0]) if phi_sets else set()
    for phi in phi_sets[1:]:
        kappa &= phi
    return SuperSets(phi_union=phi_union, cds_union=cds_union, kappa=kappa)


def vote_scores(candidate: int, supersets: SuperSets,
                eta: float, theta: float, iota: float) -> VoteTally:
    """Scaled multiplicity counts of a candidate in the three super-sets."""
    if eta <= 0 or theta <= 0 or iota <= 0:
        raise ValueError("vote scale parameters must be positive")
    c1 = supersets.phi_union[candidate]
    c2 = supersets.cds_union[candidate]
    c3 = 1 if candidate in supersets.kappa else 0
    return VoteTally(c1=c1, c2=c2, c3=c3, v1=c1 / eta, v2=c2 / theta, v3=c3 / iota)

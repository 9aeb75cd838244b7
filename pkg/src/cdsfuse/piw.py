"""Per-feature reliability weights from cross-feature agreement.

Each feature's constrained cluster is scored on two signals: how much of its
retained membership mass is corroborated by the other features (consensus),
and how concentrated its membership is on a few strong members
(concentration). An unreliable feature retrieves neighbors the other features
never see and spreads its membership thinly over them; it is masked to weight
zero, and the surviving features share the weight on a fixed decaying profile
ordered by concentration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cdsfuse.cds import ConstrainedCluster

# Membership mass fraction is measured over this many strongest members.
CONCENTRATION_TOP = 3
# Relative weight of concentration when picking the feature to mask.
CONSENSUS_BLEND = 0.25
# Weight ratio between consecutive features in the final profile.
PROFILE_DECAY = 0.176


@dataclass
class PiwVector:
    """Weights summing to 1 across features, with per-feature diagnostics."""

    weights: list[float]
    consensus: list[float]
    concentration: list[float]
    member_counts: list[int]
    masked: int | None

    def to_dict(self) -> dict:
        return {
            "weights": self.weights,
            "consensus": self.consensus,
            "concentration": self.concentration,
            "member_counts": self.member_counts,
            "masked": self.masked,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PiwVector":
        return cls(
            weights=list(d["weights"]),
            consensus=list(d["consensus"]),
            concentration=list(d["concentration"]),
            member_counts=list(d["member_counts"]),
            masked=d["masked"],
        )


def _members(cluster: ConstrainedCluster) -> dict[int, float]:
    """Non-query cluster members mapped to their membership score."""
    out = {}
    for node, x in zip(cluster.node_ids, cluster.membership):
        if node != cluster.query:
            out[node] = float(x)
    return out


def concentration_score(membership: dict[int, float],
                        top: int = CONCENTRATION_TOP) -> float:
    """Fraction of total membership mass held by the ``top`` strongest members.

    Clusters with fewer than two members score 0: a singleton is trivially
    concentrated and carries no evidence either way.
    """
    if len(membership) < 2:
        return 0.0
    values = sorted(membership.values(), reverse=True)
    total = sum(values)
    if total <= 0.0:
        return 0.0
    return sum(values[:top]) / total


def consensus_mass(membership: dict[int, float],
                   retained: set[int],
                   others_retained: set[int]) -> float:
    """Retained membership mass corroborated by at least one other feature."""
    return sum(x for node, x in membership.items()
               if node in retained and node in others_retained)


def compute_piw(clusters: list[ConstrainedCluster]) -> PiwVector:
    """Weight the features by how much their clusters corroborate each other.

    The feature with the lowest blended consensus-plus-concentration score is
    masked to zero weight (never the most concentrated one); the rest receive
    a geometric profile with ratio ``PROFILE_DECAY`` in concentration order.
    """
    if not clusters:
        raise ValueError("need at least one cluster")
    z = len(clusters)
    memberships = [_members(c) for c in clusters]
    retained = [set(c.inliers) - {c.query} for c in clusters]

    conc = [concentration_score(m) for m in memberships]
    cons = []
    for i in range(z):
        others = set().union(*(retained[j] for j in range(z) if j != i)) \
            if z > 1 else set()
        cons.append(consensus_mass(memberships[i], retained[i], others))
    counts = [len(m) for m in memberships]

    if z == 1:
        return PiwVector(weights=[1.0], consensus=cons, concentration=conc,
                         member_counts=counts, masked=None)

    top = max(range(z), key=lambda i: (conc[i], cons[i], -i))
    masked = None
    if z >= 3:
        blended = [cons[i] + CONSENSUS_BLEND * conc[i] for i in range(z)]
        masked = min((i for i in range(z) if i != top),
                     key=lambda i: (blended[i], i))

    active = [i for i in range(z) if i != masked]
    active.sort(key=lambda i: (-conc[i], -cons[i], i))
    raw = np.zeros(z)
    for pos, i in enumerate(active):
        raw[i] = PROFILE_DECAY ** pos
    weights = raw / raw.sum()
    return PiwVector(weights=[float(w) for w in weights],
                     consensus=cons, concentration=conc,
                     member_counts=counts, masked=masked)

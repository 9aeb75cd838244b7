"""Final similarity fusion: weighted geometric mean of per-feature scores
mixed with vote scores, plus the uniform-weight naive baseline."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from cdsfuse.affinity import build_subgraph
from cdsfuse.cds import ConstrainedCluster, constrained_cluster
from cdsfuse.matrixio import FeatureMatrix, FusionConfig
from cdsfuse.nnselect import RankedList, fixed_knn, incremental_knn, rank
from cdsfuse.piw import PiwVector, compute_piw
from cdsfuse.voting import VoteTally, build_phi_sets, build_supersets, vote_scores


@dataclass
class FusionResult:
    """Fused ranking for one query plus the diagnostics that produced it."""

    query: int
    ranking: RankedList
    piw: PiwVector
    clusters: list[ConstrainedCluster]
    votes: dict[int, VoteTally]
    config: dict

    def to_dict(self) -> dict:
        return {
            "query": self.query,
            "ranking": {"ids": self.ranking.ids, "scores": self.ranking.scores},
            "piw": self.piw.to_dict(),
            "clusters": [c.summary() for c in self.clusters],
            "votes": {str(c): v.to_dict() for c, v in self.votes.items()},
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FusionResult":
        return cls(
            query=d["query"],
            ranking=RankedList(query=d["query"], ids=list(d["ranking"]["ids"]),
                               scores=list(d["ranking"]["scores"])),
            piw=PiwVector.from_dict(d["piw"]),
            clusters=[ConstrainedCluster.from_summary(c) for c in d["clusters"]],
            votes={int(c): VoteTally.from_dict(v) for c, v in d["votes"].items()},
            config=dict(d["config"]),
        )


def weighted_geometric(sims, piw_weights) -> float:
    """Product of sims_i ** w_i with 0**0 == 1."""
    total = 1.0
    for s, w in zip(sims, piw_weights):
        if w == 0.0:
            continue
        if s == 0.0:
            return 0.0
        total *= s ** w
    return total


def final_similarity(n_s: float, votes: tuple[float, float, float],
                     lambda_mix: float) -> float:
    """Convex mix of the weighted geometric similarity and the summed votes."""
    if not 0.0 <= lambda_mix <= 1.0:
        raise ValueError(f"lambda_mix must be in [0,1], got {lambda_mix}")
    return lambda_mix * n_s + (1.0 - lambda_mix) * sum(votes)


def naive_fusion(sims) -> float:
    """Uniform-weight baseline: product of similarities over feature count."""
    sims = list(sims)
    if not sims:
        raise ValueError("need at least one similarity")
    prod = 1.0
    for s in sims:
        prod *= s
    return prod / len(sims)


def retrieve(q: int, features: list[FeatureMatrix], cfg: FusionConfig) -> FusionResult:
    """Run the full fusion pipeline for one query.

    Candidates come from the union of the per-feature neighbor sets; with
    ``cfg.full_ranking`` the remaining items are appended below that pool,
    scored by the vote-free similarity term only.
    """
    z = len(features)
    if z < 1:
        raise ValueError("need at least one feature matrix")
    n = features[0].n
    for fm in features:
        if fm.n != n:
            raise ValueError("feature matrices disagree on item count")
    if not 0 <= q < n:
        raise ValueError(f"query id {q} out of range [0,{n})")

    nn_sets = []
    clusters = []
    for fm in features:
        ranked = rank(fm, q)
        if cfg.fixed_k is not None:
            nset = fixed_knn(ranked, cfg.fixed_k)
        else:
            nset = incremental_knn(ranked, cfg.npc, cfg.k_max)
        sub = build_subgraph(fm, [q] + nset.members)
        clusters.append(constrained_cluster(sub, cfg))
        nn_sets.append(nset)

    piw = compute_piw(clusters)

    eta = cfg.eta if cfg.eta is not None else float(z)
    theta = cfg.theta if cfg.theta is not None else float(z)
    iota = cfg.iota if cfg.iota is not None else float(z)

    pool = sorted(set().union(*(set(s.members) for s in nn_sets)))
    votes: dict[int, VoteTally] = {}
    if z >= 2:
        phis = build_phi_sets([set(s.members) for s in nn_sets])
        supersets = build_supersets(phis, [set(c.inliers) for c in clusters])
        for cand in pool:
            votes[cand] = vote_scores(cand, supersets, eta, theta, iota)

    sim_rows = np.stack([fm.values[q] for fm in features])
    weights = np.asarray(piw.weights)

    def fused_score(cand: int, with_votes: bool) -> float:
        n_s = weighted_geometric(sim_rows[:, cand], weights)
        if with_votes and cand in votes:
            tally = votes[cand]
            return final_similarity(n_s, (tally.v1, tally.v2, tally.v3), cfg.lambda_mix)
        return final_similarity(n_s, (0.0, 0.0, 0.0), cfg.lambda_mix)

    scored = sorted(((fused_score(c, True), c) for c in pool),
                    key=lambda t: (-t[0], t[1]))
    ids = [c for _, c in scored]
    scores = [s for s, _ in scored]

    if cfg.full_ranking:
        pool_set = set(pool)
        rest = [c for c in range(n) if c != q and c not in pool_set]
        rest_scored = sorted(((fused_score(c, False), c) for c in rest),
                             key=lambda t: (-t[0], t[1]))
        ids.extend(c for _, c in rest_scored)
        scores.extend(s for s, _ in rest_scored)

    ranking = RankedList(query=q, ids=ids, scores=scores)
    return FusionResult(query=q, ranking=ranking, piw=piw, clusters=clusters,
                        votes=votes, config=_config_echo(cfg))


def _config_echo(cfg: FusionConfig) -> dict:
    return asdict(cfg)

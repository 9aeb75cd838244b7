"""Constrained dominant set extraction on a query-centered subgraph.

The quadratic form x' (A - mu * G) x with G the diagonal that is zero at the
query and one elsewhere is maximized over the standard simplex by replicator
dynamics.  With mu above the largest eigenvalue of the off-query principal
submatrix, every local maximizer's support contains the query, so the
resulting cluster always includes it.  Members whose membership score falls
below the dynamic threshold zeta are flagged as outliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cdsfuse._kernels import replicator, replicator_step
from cdsfuse.affinity import SubgraphAffinity
from cdsfuse.matrixio import FusionConfig

__all__ = [
    "PayoffMatrix",
    "ConstrainedCluster",
    "power_iteration",
    "mu_bound",
    "build_payoff",
    "replicator_solve",
    "replicator_step",
    "zeta_threshold",
    "constrained_cluster",
]


@dataclass
class PayoffMatrix:
    """Shifted payoff A - mu*G, made entry-wise nonnegative."""

    values: np.ndarray
    mu: float
    shift: float

    @property
    def m(self) -> int:
        return self.values.shape[0]


@dataclass
class ConstrainedCluster:
    """Cluster around a query with per-node membership scores."""

    query: int
    node_ids: list[int]
    membership: np.ndarray
    zeta: float
    support: list[int]
    inliers: list[int]
    outliers: list[int]
    mu: float = 0.0
    iterations: int = 0

    @property
    def inlier_scores(self) -> np.ndarray:
        idx = {c: i for i, c in enumerate(self.node_ids)}
        return self.membership[[idx[c] for c in self.inliers]]

    def summary(self) -> dict:
        return {
            "query": self.query,
            "node_ids": self.node_ids,
            "membership": self.membership.tolist(),
            "zeta": self.zeta,
            "support": self.support,
            "inliers": self.inliers,
            "outliers": self.outliers,
            "mu": self.mu,
            "iterations": self.iterations,
        }

    @classmethod
    def from_summary(cls, d: dict) -> "ConstrainedCluster":
        return cls(
            query=d["query"],
            node_ids=list(d["node_ids"]),
            membership=np.asarray(d["membership"], dtype=np.float64),
            zeta=d["zeta"],
            support=list(d["support"]),
            inliers=list(d["inliers"]),
            outliers=list(d["outliers"]),
            mu=d.get("mu", 0.0),
            iterations=d.get("iterations", 0),
        )


def power_iteration(A: np.ndarray, tol: float = 1e-10, max_iter: int = 1000) -> float:
    """Largest eigenvalue of a symmetric nonnegative matrix by power iteration.

    Deterministic all-ones start; stops on relative eigenvalue change < tol.
    Returns 0 for an all-zero matrix.
    """
    m = A.shape[0]
    if m == 0:
        return 0.0
    v = np.ones(m) / np.sqrt(m)
    lam = 0.0
    for _ in range(max_iter):
        w = A @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_new = float(v @ (A @ v))
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def mu_bound(sub: SubgraphAffinity, mu_epsilon: float = 1e-3) -> float:
    """Strict upper bound on the off-query principal submatrix's spectrum."""
    if sub.m <= 1:
        return mu_epsilon
    A_rest = np.ascontiguousarray(sub.A[1:, 1:])
    return power_iteration(A_rest) + mu_epsilon


def build_payoff(sub: SubgraphAffinity, mu: float) -> PayoffMatrix:
    """Subtract mu from the non-query diagonal and shift entries nonnegative."""
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    ahat = sub.A.copy()
    idx = np.arange(1, sub.m)
    ahat[idx, idx] -= mu
    low = float(ahat.min()) if sub.m else 0.0
    shift = -low if low < 0 else 0.0
    if shift:
        ahat += shift
    return PayoffMatrix(values=ahat, mu=mu, shift=shift)


def replicator_solve(P: PayoffMatrix, x0: np.ndarray, tol: float, max_iter: int):
    """Run replicator dynamics from x0; returns (x, iterations)."""
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (P.m,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({P.m},)")
    values = np.ascontiguousarray(P.values)
    return replicator(values, x0, tol, max_iter)


def zeta_threshold(x: np.ndarray, lambda_scale: float) -> float:
    """Dynamic inlier cutoff: Lambda * (1 - max(x) + min(x)) / len(x)."""
    x = np.asarray(x)
    if x.size == 0:
        raise ValueError("membership vector is empty")
    return lambda_scale * (1.0 - float(x.max()) + float(x.min())) / x.size


def constrained_cluster(sub: SubgraphAffinity, cfg: FusionConfig) -> ConstrainedCluster:
    """Full pipeline: mu bound, payoff, replicator from barycenter, threshold."""
    m = sub.m
    q = sub.query
    if m == 1:
        x = np.array([1.0])
        return ConstrainedCluster(
            query=q, node_ids=list(sub.node_ids), membership=x,
            zeta=zeta_threshold(x, cfg.lambda_scale), support=[q],
            inliers=[q], outliers=[], mu=cfg.mu_epsilon, iterations=0,
        )
    mu = mu_bound(sub, cfg.mu_epsilon)
    payoff = build_payoff(sub, mu)
    x0 = np.full(m, 1.0 / m)
    x, iters = replicator_solve(payoff, x0, cfg.rd_tol, cfg.rd_max_iter)
    zeta = zeta_threshold(x, cfg.lambda_scale)
    support = [sub.node_ids[i] for i in range(m) if x[i] > cfg.support_eps]
    assert q in support, "query dropped from support despite the mu bound"
    inliers = [q]
    outliers = []
    for i in range(1, m):
        if x[i] >= zeta:
            inliers.append(sub.node_ids[i])
        else:
            outliers.append(sub.node_ids[i])
    return ConstrainedCluster(
        query=q, node_ids=list(sub.node_ids), membership=x, zeta=zeta,
        support=support, inliers=inliers, outliers=outliers, mu=mu, iterations=iters,
    )

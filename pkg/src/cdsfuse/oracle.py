"""Brute-force references used by the test suite.

Equilibria of the simplex quadratic program are enumerated support by
support: within a candidate support the payoffs must be equal, off the
support they must not exceed the common value.  This path never touches the
replicator iteration it is used to verify.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from cdsfuse.cds import PayoffMatrix


def enumerate_equilibria(P: PayoffMatrix, query_pos: int = 0,
                         tol: float = 1e-9) -> list[tuple[np.ndarray, float]]:
    """All first-order equilibria whose support contains the query position.

    Returns (membership vector, objective value) pairs.  Supports whose
    within-support linear system is singular are skipped.
    """
    A = P.values
    m = P.m
    if m > 10:
        raise ValueError("oracle limited to m <= 10")
    others = [i for i in range(m) if i != query_pos]
    results = []
    for size in range(0, m):
        for extra in combinations(others, size):
            support = sorted((query_pos,) + extra)
            x = _solve_support(A, support)
            if x is None:
                continue
            if np.any(x[support] < -tol):
                continue
            x = np.clip(x, 0.0, None)
            s = x.sum()
            if s <= 0:
                continue
            x /= s
            obj = float(x @ A @ x)
            payoff = A @ x
            if np.any(payoff > obj + tol):
                continue
            results.append((x, obj))
    return results


def _solve_support(A: np.ndarray, support: list[int]):
    """Solve equal-payoff-on-support with unit mass; None when singular."""
    k = len(support)
    sub = A[np.ix_(support, support)]
    # unknowns: x_S and the common payoff c
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = sub
    M[:k, k] = -1.0
    M[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(sol)):
        return None
    x = np.zeros(A.shape[0])
    x[support] = sol[:k]
    return x


def check_nash(P: PayoffMatrix, x: np.ndarray, tol: float = 1e-6,
               support_eps: float = 1e-6) -> bool:
    """First-order equilibrium test: equal payoff on the support, no better
    payoff off it."""
    x = np.asarray(x, dtype=np.float64)
    A = P.values
    payoff = A @ x
    value = float(x @ payoff)
    on = x > support_eps
    if np.any(np.abs(payoff[on] - value) > tol):
        return False
    if np.any(payoff[~on] > value + tol):
        return False
    return True

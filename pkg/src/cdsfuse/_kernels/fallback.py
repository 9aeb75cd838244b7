"""Pure-numpy replicator kernel, used when the compiled extension is absent."""

from __future__ import annotations

import numpy as np


def replicator_step(P: np.ndarray, x: np.ndarray) -> np.ndarray:
    """One multiplicative replicator update; renormalizes against fp drift."""
    px = P @ x
    denom = float(x @ px)
    if denom <= 0.0:
        return x.copy()
    x_new = x * px / denom
    x_new /= x_new.sum()
    return x_new


def replicator(P: np.ndarray, x0: np.ndarray, tol: float, max_iter: int):
    """Iterate replicator dynamics until the L1 step change drops below tol.

    Returns the final simplex point and the number of iterations taken.
    """
    x = np.array(x0, dtype=np.float64)
    for it in range(max_iter):
        px = P @ x
        denom = float(x @ px)
        if denom <= 0.0:
            return x, it
        x_new = x * px / denom
        x_new /= x_new.sum()
        diff = float(np.abs(x_new - x).sum())
        x = x_new
        if diff < tol:
            return x, it + 1
    return x, max_iter

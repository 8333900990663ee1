"""
Simplex projection and simplex-constrained least squares.

Used to decide membership in a convex mixture class: a density belongs to
conv{f_1, ..., f_k} iff its least-squares distance to the hull is zero.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import nnls

logger = logging.getLogger(__name__)

# Weight of the appended sum-to-one row in the nnls system
SUM_ROW_WEIGHT = 1e3
POLISH_ITERATIONS = 200


def project_to_simplex(v: ArrayLike) -> NDArray[np.float64]:
    """
    Euclidean projection onto {w : w >= 0, sum(w) = 1}.

    Sort-based, non-iterative: find the largest rho with
    u_rho + (1 - sum_{i<=rho} u_i)/rho > 0 on the descending sort u.
    """
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    cumsum = np.cumsum(u)
    ranks = np.arange(1, v.size + 1)
    positive = u + (1.0 - cumsum) / ranks > 0
    rho = int(np.nonzero(positive)[0][-1])
    shift = (1.0 - cumsum[rho]) / (rho + 1)
    return np.maximum(v + shift, 0.0)


def fit_simplex_weights(
    components: ArrayLike,
    target: ArrayLike,
    max_iter: int = POLISH_ITERATIONS,
    tol: float = 1e-14,
) -> tuple[NDArray[np.float64], float]:
    """
    Least-squares fit of ``target`` by a convex combination of ``components``.

    A non-negative least squares solve with an appended (heavily weighted)
    row of ones gives a near-feasible start; it is then projected onto the
    simplex and polished by projected gradient descent.

    Args:
        components: (k, m) array, one component density per row
        target: (m,) density values
        max_iter: Projected-gradient iteration cap
        tol: Stop when the objective improves by less than this

    Returns:
        (weights, residual) where residual is the grid L2 norm
        sqrt(mean((weights @ components - target)^2))
    """
    comps = np.atleast_2d(np.asarray(components, dtype=float))
    x = np.asarray(target, dtype=float)
    k, m = comps.shape
    if x.shape != (m,):
        raise ValueError(f"target has shape {x.shape}, expected ({m},)")

    A = comps.T  # (m, k)
    A_aug = np.vstack([A, SUM_ROW_WEIGHT * np.ones((1, k))])
    x_aug = np.concatenate([x, [SUM_ROW_WEIGHT]])
    w, _ = nnls(A_aug, x_aug)
    w = project_to_simplex(w)

    def objective(weights: NDArray[np.float64]) -> float:
        r = A @ weights - x
        return 0.5 * float(r @ r)

    lipschitz = float(np.linalg.norm(A, ord=2) ** 2)
    if lipschitz > 0.0:
        step = 1.0 / lipschitz
        current = objective(w)
        for _ in range(max_iter):
            grad = A.T @ (A @ w - x)
            candidate = project_to_simplex(w - step * grad)
            value = objective(candidate)
            if current - value < tol:
                if value < current:
                    w = candidate
                break
            w, current = candidate, value

    residual = float(np.sqrt(np.mean((A @ w - x) ** 2)))
    logger.debug("simplex fit: k=%d residual=%.3e", k, residual)
    return w, residual

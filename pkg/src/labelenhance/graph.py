"""k-nearest-neighbor similarity graph over instances.

Directed Gaussian weights w_ij = exp(-||x_i - x_j||^2 / sigma^2) are put on
the k nearest neighbors of each instance (self excluded, distance ties broken
toward the smaller index) and then symmetrized as W <- W + W^T, so mutual
neighbors end up with doubled weight. Degrees are computed after
symmetrization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass
class NeighborGraph:
    """Symmetric nonnegative weight matrix plus its row degrees."""

    weights: np.ndarray  # n x n, symmetric, zero diagonal
    degrees: np.ndarray  # row sums of weights
    k: int
    sigma: float


def pairwise_sq_dists(X: np.ndarray) -> np.ndarray:
    """Matrix of squared Euclidean distances between rows of X."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("need an n x d matrix with n >= 2")
    if not np.isfinite(X).all():
        raise DataError("non-finite feature value")
    sq = np.sum(X * X, axis=1)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    D = 0.5 * (D + D.T)
    np.maximum(D, 0.0, out=D)
    np.fill_diagonal(D, 0.0)
    return D


def build_graph(X: np.ndarray, k: int, sigma: float | None = None) -> NeighborGraph:
    """Build the symmetrized k-NN Gaussian weight graph.

    sigma=None picks the bandwidth as the mean distance from each instance
    to its k-th nearest neighbor; pass a positive number to fix it.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= k <= n - 1:
        raise DataError(f"k must be in [1, {n - 1}], got {k}")
    D = pairwise_sq_dists(X)
    np.fill_diagonal(D, np.inf)  # exclude self from the neighbor search

    # stable sort keeps ties ordered by index
    order = np.argsort(D, axis=1, kind="stable")
    neighbors = order[:, :k]

    if sigma is None:
        kth = D[np.arange(n), order[:, k - 1]]
        sigma = float(np.mean(np.sqrt(kth)))
    if not np.isfinite(sigma) or sigma <= 0:
        raise DataError(f"sigma must be positive, got {sigma} "
                        "(duplicate-only data cannot use the k-NN bandwidth heuristic)")

    W = np.zeros((n, n))
    rows = np.repeat(np.arange(n), k)
    cols = neighbors.ravel()
    W[rows, cols] = np.exp(-D[rows, cols] / (sigma * sigma))
    W = W + W.T
    np.fill_diagonal(W, 0.0)
    degrees = W.sum(axis=1)
    if (degrees <= 0).any():
        raise DataError("zero-degree instance: all neighbor weights underflowed; increase sigma")
    return NeighborGraph(weights=W, degrees=degrees, k=k, sigma=sigma)

"""Dependence-maximizing linear dimensionality reduction.

The projection P maximizes tr(H K H F~) -- the (unnormalized) Hilbert-Schmidt
dependence between the projected-feature kernel K and the confidence kernel
F~ -- subject to the blended orthonormality constraint

    alpha * p_i^T (X^T X) p_j + (1 - alpha) * p_i^T p_j = delta_ij.

Stationarity turns this into the generalized symmetric eigenproblem
A p = lambda B p with A = X^T H F~ H X and B = alpha X^T X + (1 - alpha) I,
solved by Cholesky reduction of B to a standard symmetric problem. The top
d' eigenvectors, descending by eigenvalue, form the projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DataError

JITTER_SCALE = 1e-10


@dataclass
class Projection:
    """d x d' projection with the eigenvalues that ranked its columns."""

    matrix: np.ndarray
    eigenvalues: np.ndarray  # descending
    alpha: float
    d_prime: int


def centering_matrix(n: int) -> np.ndarray:
    """H = I - (1/n) 11^T; symmetric, idempotent, annihilates constants."""
    if n < 2:
        raise DataError(f"centering needs n >= 2, got {n}")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def label_kernel(F: np.ndarray) -> np.ndarray:
    """Linear kernel of confidence rows: F F^T."""
    F = np.asarray(getattr(F, "values", F), dtype=float)
    G = F @ F.T
    return 0.5 * (G + G.T)


def hsic_value(K: np.ndarray, F_tilde: np.ndarray, n: int) -> float:
    """(n-1)^{-2} tr(H K H F~), the normalized dependence estimate."""
    K = np.asarray(K, dtype=float)
    F_tilde = np.asarray(F_tilde, dtype=float)
    if K.shape != (n, n) or F_tilde.shape != (n, n):
        raise DataError(f"kernels must both be {n} x {n}")
    H = centering_matrix(n)
    return float(np.trace(H @ K @ H @ F_tilde)) / (n - 1) ** 2


def solve_projection(X: np.ndarray, F_tilde: np.ndarray, alpha: float, d_prime: int) -> Projection:
    """Top-d' solution of A p = lambda B p, B-orthonormal and sign-normalized.

    X is expected column-standardized by the caller. Ties in eigenvalues are
    broken by the index of each vector's largest-magnitude component; each
    column is flipped so that component is positive.
    """
    X = np.asarray(X, dtype=float)
    F_tilde = np.asarray(F_tilde, dtype=float)
    n, d = X.shape
    if not 1 <= d_prime <= d:
        raise DataError(f"d_prime must be in [1, {d}], got {d_prime}")
    if not 0.0 <= alpha <= 1.0:
        raise DataError(f"alpha must be in [0, 1], got {alpha}")
    if F_tilde.shape != (n, n):
        raise DataError(f"label kernel must be {n} x {n}")

    H = centering_matrix(n)
    M = H @ F_tilde @ H
    A = X.T @ M @ X
    A = 0.5 * (A + A.T)
    B = alpha * (X.T @ X) + (1.0 - alpha) * np.eye(d)
    B += (JITTER_SCALE * np.trace(B) / d) * np.eye(d)

    try:
        R = scipy.linalg.cholesky(B, lower=False)  # B = R^T R
    except scipy.linalg.LinAlgError as exc:
        raise DataError(f"constraint matrix not positive definite: {exc}") from None
    # C = R^{-T} A R^{-1} is symmetric with the same eigenvalues
    W1 = scipy.linalg.solve_triangular(R, A, trans="T", lower=False)
    C = scipy.linalg.solve_triangular(R, W1.T, trans="T", lower=False).T
    C = 0.5 * (C + C.T)
    evals, evecs = scipy.linalg.eigh(C)
    vectors = scipy.linalg.solve_triangular(R, evecs, lower=False)

    order = sorted(
        range(d),
        key=lambda i: (-evals[i], int(np.argmax(np.abs(vectors[:, i])))),
    )
    top = order[:d_prime]
    P = vectors[:, top].copy()
    for j in range(d_prime):
        lead = int(np.argmax(np.abs(P[:, j])))
        if P[lead, j] < 0:
            P[:, j] = -P[:, j]
    return Projection(matrix=P, eigenvalues=evals[top].copy(), alpha=alpha, d_prime=d_prime)


def project(X: np.ndarray, proj: Projection) -> np.ndarray:
    """Reduced features X P."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != proj.matrix.shape[0]:
        raise DataError(
            f"cannot project {X.shape} features with a {proj.matrix.shape} matrix"
        )
    return X @ proj.matrix

"""Label confidence from graph smoothness: a simplex-constrained QP.

Given a symmetrized neighbor graph with weights w_ij and degrees d_ii, the
confidence matrix F minimizes

    sum_ij w_ij || f_i / sqrt(d_ii) - f_j / sqrt(d_jj) ||^2

subject to each row lying on the probability simplex restricted to the
support of its logical label row. With T = 4(I - J^{-1/2} W J^{-1/2}) this
objective equals (1/2) sum_c F_c^T T F_c, so the gradient is simply T F and
the problem is solved by projected gradient descent with step 1/lambda_max(T).
Off-support entries are exactly zero at every iterate and single-support rows
stay exactly one-hot.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, InfeasibleError
from .graph import NeighborGraph

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 5000
SPECTRAL_BOUND = 8.0  # T = 4(I - S) with spec(S) in [-1, 1]


@dataclass
class SmoothingOperator:
    """The symmetric PSD matrix T driving the smoothness objective."""

    matrix: np.ndarray
    lipschitz: float


@dataclass
class ConfidenceMatrix:
    """Row-stochastic confidence values restricted to the logical support."""

    values: np.ndarray
    support: np.ndarray
    converged: bool = True
    n_iter: int = 0
    objective_history: np.ndarray | None = None  # objective at init and after each iterate

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def q(self) -> int:
        return self.values.shape[1]


def _power_iteration_lmax(T: np.ndarray, iters: int = 30) -> float:
    rng = np.random.default_rng(0)
    v = rng.standard_normal(T.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = T @ v
        norm = np.linalg.norm(w)
        if norm < 1e-300:
            return SPECTRAL_BOUND
        v = w / norm
        lam = float(v @ (T @ v))
    if not np.isfinite(lam) or lam <= 0:
        return SPECTRAL_BOUND
    return lam


def build_smoother(g: NeighborGraph) -> SmoothingOperator:
    """T = 4(I - J^{-1/2} W J^{-1/2}) with a power-iteration Lipschitz estimate."""
    if (g.degrees <= 0).any():
        raise DataError("graph has a zero-degree instance")
    inv_sqrt = 1.0 / np.sqrt(g.degrees)
    S = inv_sqrt[:, None] * g.weights * inv_sqrt[None, :]
    S = 0.5 * (S + S.T)
    T = 4.0 * (np.eye(g.weights.shape[0]) - S)
    T = 0.5 * (T + T.T)
    return SmoothingOperator(matrix=T, lipschitz=_power_iteration_lmax(T))


def init_confidence(L: np.ndarray) -> ConfidenceMatrix:
    """Uniform confidence over each row's support.

    The all-or-nothing copy of the logical matrix is infeasible whenever a
    row has several positives, so initialization spreads the unit mass
    uniformly over the positive labels instead.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2:
        raise DataError("logical labels must be an n x q matrix")
    counts = (L > 0).sum(axis=1)
    if (counts == 0).any():
        bad = int(np.argmax(counts == 0))
        raise InfeasibleError(f"infeasible: empty support in row {bad + 1}")
    F = (L > 0).astype(float) / counts[:, None]
    return ConfidenceMatrix(values=F, support=(L > 0).astype(float))


def project_restricted_simplex(v: np.ndarray, support: np.ndarray) -> np.ndarray:
    """Euclidean projection of v onto {f : sum f = 1, f >= 0, f = 0 off support}.

    Sort-and-threshold on the support coordinates; off-support coordinates are
    exactly zero in the result.
    """
    v = np.asarray(v, dtype=float)
    support = np.asarray(support)
    idx = np.flatnonzero(support > 0)
    if idx.size == 0:
        raise InfeasibleError("infeasible: empty support")
    out = np.zeros_like(v, dtype=float)
    if idx.size == 1:
        out[idx[0]] = 1.0
        return out
    u = np.sort(v[idx])[::-1]
    css = np.cumsum(u)
    j = np.arange(1, idx.size + 1)
    rho = int(np.max(np.nonzero(u - (css - 1.0) / j > 0)[0]))
    theta = (css[rho] - 1.0) / (rho + 1)
    out[idx] = np.maximum(v[idx] - theta, 0.0)
    return out


def _project_rows(V: np.ndarray, mask: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Row-wise restricted-simplex projection, vectorized over instances."""
    n, q = V.shape
    masked = np.where(mask, V, -np.inf)
    U = -np.sort(-masked, axis=1)  # descending, off-support sorted last
    finite = np.isfinite(U)
    css = np.cumsum(np.where(finite, U, 0.0), axis=1)
    j = np.arange(1, q + 1)[None, :]
    cond = finite & (U - (css - 1.0) / j > 0)
    rho = np.where(cond, np.arange(q)[None, :], -1).max(axis=1)
    theta = (css[np.arange(n), rho] - 1.0) / (rho + 1)
    out = np.maximum(V - theta[:, None], 0.0) * mask
    single = counts == 1
    if single.any():
        out[single] = mask[single].astype(float)
    return out


def smoothness_objective(T: np.ndarray, F: np.ndarray) -> float:
    """(1/2) sum_c F_c^T T F_c, the quadratic the solver minimizes."""
    return 0.5 * float(np.sum(F * (T @ F)))


def solve_confidence(
    op: SmoothingOperator,
    L: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ConfidenceMatrix:
    """Minimize the smoothness objective over the restricted simplex product.

    Projected gradient descent from the uniform-over-support initialization;
    stops when the largest entry change drops to tol. Non-convergence within
    max_iter emits a RuntimeWarning and returns the last iterate.
    """
    T = op.matrix
    start = init_confidence(L)
    if T.shape[0] != start.n:
        raise DataError(f"operator is {T.shape[0]} x {T.shape[0]} but labels have {start.n} rows")
    mask = start.support > 0
    counts = mask.sum(axis=1)
    eta = 1.0 / op.lipschitz if op.lipschitz > 1e-300 else 1.0 / SPECTRAL_BOUND
    F = start.values
    history = [smoothness_objective(T, F)]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        F_next = _project_rows(F - eta * (T @ F), mask, counts)
        delta = float(np.max(np.abs(F_next - F)))
        F = F_next
        history.append(smoothness_objective(T, F))
        if delta <= tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"confidence solver did not converge within {max_iter} iterations",
            RuntimeWarning,
        )
    return ConfidenceMatrix(
        values=F,
        support=start.support,
        converged=converged,
        n_iter=it,
        objective_history=np.asarray(history),
    )

"""Nonlinear recovery model: softmax(relu(W x)) fit to confidence targets.

One shared q x d' weight matrix, no bias. The loss is the summed squared
distance between confidence rows and model outputs plus beta ||W||_F^2;
training is plain minibatch SGD with momentum and decoupled weight decay.
Randomness (init and shuffling) comes from two PCG64 streams spawned from
one seed, so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import format_value
from .errors import DataError, TrainingDivergedError

INIT_SCALE = 0.01


@dataclass
class TrainConfig:
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 5e-4
    beta: float = 0.1
    batch_size: int = 32
    max_epochs: int = 500
    converge_tol: float = 1e-6
    seed: int = 0

    def validate(self) -> "TrainConfig":
        if self.learning_rate <= 0:
            raise DataError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise DataError(f"momentum must be in [0,1), got {self.momentum}")
        if self.batch_size < 1:
            raise DataError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_epochs < 1:
            raise DataError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.beta < 0 or self.weight_decay < 0:
            raise DataError("beta and weight_decay must be nonnegative")
        return self


@dataclass
class LeModel:
    weights: np.ndarray  # q x d'
    beta: float

    @property
    def q(self) -> int:
        return self.weights.shape[0]

    @property
    def d_prime(self) -> int:
        return self.weights.shape[1]


def _softmax_rows(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


def _batch_forward(W: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pre-activations and softmax outputs for a batch of rows."""
    Z = X @ W.T
    return Z, _softmax_rows(np.maximum(Z, 0.0))


def forward(m: LeModel, x: np.ndarray) -> np.ndarray:
    """softmax(relu(W x)) for a single reduced-feature vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.d_prime,):
        raise DataError(f"expected a vector of length {m.d_prime}, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise DataError("non-finite input")
    _, S = _batch_forward(m.weights, x[None, :])
    return S[0]


def loss(m: LeModel, X: np.ndarray, F: np.ndarray) -> float:
    """sum_i ||f_i - softmax(relu(W x_i))||^2 + beta ||W||_F^2."""
    X = np.asarray(X, dtype=float)
    F = np.asarray(getattr(F, "values", F), dtype=float)
    _, S = _batch_forward(m.weights, X)
    return float(np.sum((F - S) ** 2) + m.beta * np.sum(m.weights**2))


def gradient(m: LeModel, X: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Analytic d(loss)/dW: softmax Jacobian, relu mask (subgradient 0 at 0)."""
    X = np.asarray(X, dtype=float)
    F = np.asarray(getattr(F, "values", F), dtype=float)
    Z, S = _batch_forward(m.weights, X)
    R = S - F
    SR = S * R
    GA = 2.0 * (SR - S * SR.sum(axis=1, keepdims=True))
    GZ = GA * (Z > 0)
    return GZ.T @ X + 2.0 * m.beta * m.weights


def train(
    X: np.ndarray,
    F: np.ndarray,
    cfg: TrainConfig,
    init_weights: np.ndarray | None = None,
) -> LeModel:
    """Minibatch SGD with momentum and weight decay, deterministic per seed.

    Each step takes the gradient of the batch objective (summed data term
    plus the full regularizer); convergence is judged on the change of the
    per-instance mean of the full loss between epochs. init_weights overrides
    the default small-uniform random initialization.
    """
    cfg.validate()
    X = np.asarray(X, dtype=float)
    F = np.asarray(getattr(F, "values", F), dtype=float)
    if X.ndim != 2 or F.ndim != 2 or X.shape[0] != F.shape[0]:
        raise DataError("features and targets must have matching row counts")
    n, d_prime = X.shape
    q = F.shape[1]

    init_ss, shuffle_ss = np.random.SeedSequence(cfg.seed).spawn(2)
    init_rng = np.random.Generator(np.random.PCG64(init_ss))
    shuffle_rng = np.random.Generator(np.random.PCG64(shuffle_ss))

    if init_weights is not None:
        W = np.array(init_weights, dtype=float)
        if W.shape != (q, d_prime):
            raise DataError(f"init_weights must be {q} x {d_prime}, got {W.shape}")
    else:
        W = init_rng.uniform(-INIT_SCALE, INIT_SCALE, size=(q, d_prime))
    velocity = np.zeros_like(W)
    model = LeModel(weights=W, beta=cfg.beta)
    prev = loss(model, X, F) / n
    for epoch in range(1, cfg.max_epochs + 1):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            Zb, Sb = _batch_forward(W, X[batch])
            Rb = Sb - F[batch]
            SRb = Sb * Rb
            GA = 2.0 * (SRb - Sb * SRb.sum(axis=1, keepdims=True))
            G = (GA * (Zb > 0)).T @ X[batch] + 2.0 * cfg.beta * W
            G += cfg.weight_decay * W
            velocity = cfg.momentum * velocity + G
            W -= cfg.learning_rate * velocity
        with np.errstate(over="ignore", invalid="ignore"):
            current = loss(model, X, F) / n
        if not np.isfinite(current):
            raise TrainingDivergedError(f"loss became non-finite at epoch {epoch}", epoch)
        if abs(current - prev) <= cfg.converge_tol:
            break
        prev = current
    return model


def recover(m: LeModel, X: np.ndarray) -> np.ndarray:
    """Row-wise model outputs: the recovered label distribution matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != m.d_prime:
        raise DataError(f"expected n x {m.d_prime} features, got shape {X.shape}")
    _, S = _batch_forward(m.weights, X)
    return S


def save_model(m: LeModel, path: str | Path) -> None:
    """Checkpoint: one header line with q, d' and beta, then the weight rows."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(f"q={m.q},d_prime={m.d_prime},beta={format_value(m.beta)}\n")
            for row in m.weights:
                fh.write(",".join(format_value(v) for v in row) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def load_model(path: str | Path) -> LeModel:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            fields = dict(item.split("=", 1) for item in header.split(","))
            q, d_prime, beta = int(fields["q"]), int(fields["d_prime"]), float(fields["beta"])
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}: bad checkpoint header {header!r}: {exc}") from None
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    W = np.asarray(rows, dtype=float)
    if W.shape != (q, d_prime):
        raise DataError(f"{path}: expected {q} x {d_prime} weights, got {W.shape}")
    return LeModel(weights=W, beta=beta)

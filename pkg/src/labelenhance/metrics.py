"""Distribution distance/similarity measures and experiment aggregation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .errors import DataError

METRIC_NAMES = ("chebyshev", "clark", "canberra", "kl", "cosine", "intersection")


def _pair(d, d_hat):
    d = np.asarray(d, dtype=float).ravel()
    d_hat = np.asarray(d_hat, dtype=float).ravel()
    if d.shape != d_hat.shape:
        raise DataError(f"length mismatch: {d.shape[0]} vs {d_hat.shape[0]}")
    return d, d_hat


def chebyshev(d, d_hat) -> float:  # max absolute componentwise difference
    d, d_hat = _pair(d, d_hat)
    return float(np.max(np.abs(d - d_hat)))


def clark(d, d_hat) -> float:  # sqrt of summed squared relative differences
    d, d_hat = _pair(d, d_hat)
    s = d + d_hat
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(s > 0, (d - d_hat) ** 2 / s**2, 0.0)
    return float(np.sqrt(np.sum(terms)))


def canberra(d, d_hat) -> float:  # summed absolute relative differences
    d, d_hat = _pair(d, d_hat)
    s = d + d_hat
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(s > 0, np.abs(d - d_hat) / s, 0.0)
    return float(np.sum(terms))


def kl(d, d_hat) -> float:
    """Kullback-Leibler divergence, 0 ln 0 := 0; errors on d_j>0, d_hat_j=0."""
    d, d_hat = _pair(d, d_hat)
    pos = d > 0
    if (d_hat[pos] <= 0).any():
        j = int(np.flatnonzero(pos & (d_hat <= 0))[0])
        raise DataError(f"infinite divergence: component {j} has mass but zero estimate")
    return float(np.sum(d[pos] * np.log(d[pos] / d_hat[pos])))


def cosine(d, d_hat) -> float:
    d, d_hat = _pair(d, d_hat)
    nd, nh = np.linalg.norm(d), np.linalg.norm(d_hat)
    if nd == 0 or nh == 0:
        raise DataError("cosine similarity undefined for a zero vector")
    return float(np.dot(d, d_hat) / (nd * nh))


def intersection(d, d_hat) -> float:  # summed componentwise minima
    d, d_hat = _pair(d, d_hat)
    return float(np.sum(np.minimum(d, d_hat)))


@dataclass
class MetricReport:
    """Per-metric means over instances (four distances, two similarities)."""

    chebyshev: float
    clark: float
    canberra: float
    kl: float
    cosine: float
    intersection: float
    n_instances: int

    def to_dict(self) -> dict:
        return {
            "chebyshev": self.chebyshev,
            "clark": self.clark,
            "canberra": self.canberra,
            "kl": self.kl,
            "cosine": self.cosine,
            "intersection": self.intersection,
            "n_instances": self.n_instances,
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")


def report(D_true: np.ndarray, D_pred: np.ndarray) -> MetricReport:
    """Arithmetic mean of every measure over the instance rows."""
    D_true = np.asarray(D_true, dtype=float)
    D_pred = np.asarray(D_pred, dtype=float)
    if D_true.shape != D_pred.shape:
        raise DataError(f"shape mismatch: {D_true.shape} vs {D_pred.shape}")
    if D_true.ndim != 2 or D_true.shape[0] == 0:
        raise DataError("need a nonempty n x q matrix")
    totals = np.zeros(len(METRIC_NAMES))
    fns = (chebyshev, clark, canberra, kl, cosine, intersection)
    for i, (t_row, p_row) in enumerate(zip(D_true, D_pred)):
        try:
            for j, fn in enumerate(fns):
                totals[j] += fn(t_row, p_row)
        except DataError as exc:
            raise DataError(f"row {i + 1}: {exc}") from None
    means = totals / D_true.shape[0]
    return MetricReport(*(float(v) for v in means), n_instances=D_true.shape[0])


def average_ranks(scores: dict[str, list[float]], higher_is_better: bool = False) -> dict[str, float]:
    """Mean per-dataset rank of each method (1 = best, ties share the mean rank)."""
    if not scores:
        raise DataError("empty score table")
    methods = list(scores)
    try:
        table = np.asarray([scores[m] for m in methods], dtype=float)
    except ValueError:
        raise DataError("methods cover different dataset counts") from None
    if table.ndim != 2 or table.shape[1] == 0:
        raise DataError("each method needs at least one dataset score")
    if not np.isfinite(table).all():
        raise DataError("score table has missing or non-finite cells")
    signed = -table if higher_is_better else table
    ranks = np.column_stack([rankdata(signed[:, j], method="average") for j in range(table.shape[1])])
    return {m: float(r) for m, r in zip(methods, ranks.mean(axis=1))}

"""End-to-end orchestration: degrade -> graph -> confidence -> reduce -> fit.

The stages operate on in-memory datasets (`enhance_dataset`) so both the CLI
and the HTTP service share one code path; `run_*` wrappers add the file I/O.
Feature standardization happens once, up front, so the neighbor graph and the
projection see the same matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import metrics
from .confidence import ConfidenceMatrix, build_smoother, init_confidence, solve_confidence
from .dataset import (
    Dataset,
    degrade as degrade_dataset,
    load_dataset,
    load_distribution,
    save_dataset,
    save_distribution,
    threshold_labels,
)
from .errors import DataError
from .graph import build_graph
from .model import LeModel, TrainConfig, recover, train
from .reduction import Projection, label_kernel, project, solve_projection

log = logging.getLogger(__name__)

FEATURES_VARIANTS = ("raw", "reduced")
TARGETS_VARIANTS = ("logical", "confidence")


@dataclass
class ExperimentConfig:
    """Everything one enhancement run depends on, defaults per the method."""

    input: str | Path | None = None
    threshold: float | None = None  # None -> 1/q
    k: int = 10
    sigma: float | None = None  # None -> mean k-th-neighbor distance
    alpha: float = 0.1
    d_prime: int = 10
    train: TrainConfig = field(default_factory=TrainConfig)
    features_variant: str = "reduced"
    targets_variant: str = "confidence"
    seed: int = 0
    out_dist: str | Path | None = None
    out_metrics: str | Path | None = None
    out_augmented: str | Path | None = None

    def validate(self) -> "ExperimentConfig":
        if self.features_variant not in FEATURES_VARIANTS:
            raise DataError(f"features_variant must be one of {FEATURES_VARIANTS}")
        if self.targets_variant not in TARGETS_VARIANTS:
            raise DataError(f"targets_variant must be one of {TARGETS_VARIANTS}")
        if self.threshold is not None and not 0.0 < self.threshold < 1.0:
            raise DataError(f"threshold must be in (0,1), got {self.threshold}")
        if self.d_prime < 1:
            raise DataError(f"d_prime must be >= 1, got {self.d_prime}")
        self.train.validate()
        return self


@dataclass
class EnhanceResult:
    recovered: np.ndarray
    label_names: list[str]
    report: metrics.MetricReport | None
    model: LeModel
    reduced_features: np.ndarray
    targets: np.ndarray
    confidence: ConfidenceMatrix | None
    projection: Projection | None


def standardize_features(X: np.ndarray) -> np.ndarray:
    """Zero-mean, unit-variance columns; constant columns become all-zero."""
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    out = np.where(std > 0, (X - mean) / np.where(std > 0, std, 1.0), 0.0)
    return out


def enhance_dataset(ds: Dataset, cfg: ExperimentConfig) -> EnhanceResult:
    """Run the enhancement pipeline on an in-memory dataset.

    Distribution input is self-degraded and the originals kept as ground
    truth; logical input runs in recovery-only mode (no metric report).
    """
    cfg.validate()
    if ds.label_kind == "distribution":
        truth = ds.labels
        threshold = cfg.threshold if cfg.threshold is not None else 1.0 / ds.q
        logical = threshold_labels(ds.labels, threshold)
        log.info("degraded at threshold %g", threshold)
    else:
        truth = None
        logical = ds.labels

    X = standardize_features(ds.features)

    conf = None
    if cfg.targets_variant == "confidence":
        g = build_graph(X, cfg.k, cfg.sigma)
        op = build_smoother(g)
        conf = solve_confidence(op, logical)
        targets = conf.values
        log.info(
            "confidence solved: %d iterations, converged=%s", conf.n_iter, conf.converged
        )
    else:
        targets = init_confidence(logical).values  # row-normalized logical labels

    projection = None
    if cfg.features_variant == "reduced":
        d_prime = min(cfg.d_prime, ds.d)
        projection = solve_projection(X, label_kernel(targets), cfg.alpha, d_prime)
        # constraint-normalized columns are O(1/sqrt(n)) per entry; standardize
        # again so both feature variants hand the trainer the same scale
        X_t = standardize_features(project(X, projection))
        log.info("projected %d -> %d dimensions", ds.d, d_prime)
    else:
        X_t = X

    train_cfg = replace(cfg.train, seed=cfg.seed)
    m = train(X_t, targets, train_cfg)
    recovered = recover(m, X_t)

    rep = metrics.report(truth, recovered) if truth is not None else None
    return EnhanceResult(
        recovered=recovered,
        label_names=list(ds.label_names),
        report=rep,
        model=m,
        reduced_features=X_t,
        targets=targets,
        confidence=conf,
        projection=projection,
    )


def run_enhance(cfg: ExperimentConfig) -> EnhanceResult:
    """File-level enhancement: load, run, write the requested outputs."""
    if cfg.input is None:
        raise DataError("no input dataset given")
    ds = load_dataset(cfg.input)
    result = enhance_dataset(ds, cfg)
    if cfg.out_dist is not None:
        save_distribution(result.recovered, result.label_names, cfg.out_dist)
        log.info("recovered distribution written to %s", cfg.out_dist)
    if cfg.out_metrics is not None and result.report is not None:
        result.report.save(cfg.out_metrics)
        log.info("metric report written to %s", cfg.out_metrics)
    if cfg.out_augmented is not None:
        if cfg.features_variant == "raw":
            feature_names = list(ds.feature_names)
        else:
            feature_names = [str(j) for j in range(result.reduced_features.shape[1])]
        aug = Dataset(
            features=result.reduced_features,
            labels=result.targets,
            label_kind="distribution",
            feature_names=feature_names,
            label_names=result.label_names,
        )
        save_dataset(aug, cfg.out_augmented)
        log.info("augmented dataset written to %s", cfg.out_augmented)
    return result


def run_degrade(input_path: str | Path, threshold: float, output_path: str | Path) -> Dataset:
    """Degrade a distribution dataset file into a logical one."""
    ds = load_dataset(input_path, expected_kind="distribution")
    out = degrade_dataset(ds, threshold)
    save_dataset(out, output_path)
    return out


def run_eval(
    pred_path: str | Path,
    truth_path: str | Path,
    output_path: str | Path | None = None,
) -> metrics.MetricReport:
    """Compare a recovered distribution file against ground truth."""
    pred, _ = load_distribution(pred_path)
    truth, _ = load_distribution(truth_path)
    if pred.shape != truth.shape:
        raise DataError(f"shape mismatch: prediction {pred.shape} vs truth {truth.shape}")
    rep = metrics.report(truth, pred)
    if output_path is not None:
        rep.save(output_path)
    return rep


def synth_dataset(n: int, d: int, q: int, noise: float, seed: int) -> Dataset:
    """Random ground-truth dataset: D = softmax(G x + eps) rowwise."""
    if n < 10:
        raise DataError(f"n must be >= 10, got {n}")
    if d < 1 or q < 2:
        raise DataError("need d >= 1 and q >= 2")
    if noise < 0:
        raise DataError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    # variance-normalized map keeps logits O(1), so the noise level matters
    # and thresholding yields a mix of single- and multi-label supports
    G = rng.standard_normal((q, d)) / np.sqrt(d)
    Z = X @ G.T
    if noise > 0:
        Z = Z + rng.normal(0.0, noise, size=(n, q))
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    D = E / E.sum(axis=1, keepdims=True)
    ds = Dataset(
        features=X,
        labels=D,
        label_kind="distribution",
        feature_names=[str(j) for j in range(d)],
        label_names=[str(j) for j in range(q)],
    )
    return ds.validate()


def run_synth(n: int, d: int, q: int, noise: float, seed: int, output_path: str | Path) -> Dataset:
    ds = synth_dataset(n, d, q, noise, seed)
    save_dataset(ds, output_path)
    return ds

"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..dataset import Dataset, infer_label_kind
from ..model import TrainConfig
from ..pipeline import ExperimentConfig


class DatasetPayload(BaseModel):
    """A dataset carried inline: matrices as nested lists, names per column."""

    feature_names: list[str]
    label_names: list[str]
    features: list[list[float]]
    labels: list[list[float]]
    label_kind: Optional[Literal["distribution", "logical"]] = None

    def to_dataset(self) -> Dataset:
        labels = np.asarray(self.labels, dtype=float)
        kind = self.label_kind or infer_label_kind(labels)
        ds = Dataset(
            features=np.asarray(self.features, dtype=float),
            labels=labels,
            label_kind=kind,
            feature_names=list(self.feature_names),
            label_names=list(self.label_names),
        )
        return ds.validate()

    @classmethod
    def from_dataset(cls, ds: Dataset) -> "DatasetPayload":
        return cls(
            feature_names=list(ds.feature_names),
            label_names=list(ds.label_names),
            features=ds.features.tolist(),
            labels=ds.labels.tolist(),
            label_kind=ds.label_kind,
        )


class EnhanceOptions(BaseModel):
    """Pipeline knobs; defaults match the CLI."""

    threshold: Optional[float] = Field(default=None, description="degradation threshold, default 1/q")
    k: int = 10
    sigma: Optional[float] = Field(default=None, description="graph bandwidth, default k-NN heuristic")
    alpha: float = 0.1
    d_prime: int = 10
    beta: float = 0.1
    learning_rate: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 5e-4
    batch_size: int = 32
    max_epochs: int = 500
    converge_tol: float = 1e-6
    seed: int = 0
    features_variant: Literal["raw", "reduced"] = "reduced"
    targets_variant: Literal["logical", "confidence"] = "confidence"

    def to_config(self) -> ExperimentConfig:
        train = TrainConfig(
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            weight_decay=self.weight_decay,
            beta=self.beta,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            converge_tol=self.converge_tol,
            seed=self.seed,
        )
        return ExperimentConfig(
            threshold=self.threshold,
            k=self.k,
            sigma=self.sigma,
            alpha=self.alpha,
            d_prime=self.d_prime,
            train=train,
            features_variant=self.features_variant,
            targets_variant=self.targets_variant,
            seed=self.seed,
        )


class EnhanceRequest(BaseModel):
    dataset: DatasetPayload
    options: EnhanceOptions = Field(default_factory=EnhanceOptions)


class MetricValues(BaseModel):
    chebyshev: float
    clark: float
    canberra: float
    kl: float
    cosine: float
    intersection: float
    n_instances: int


class EnhanceDiagnostics(BaseModel):
    confidence_converged: Optional[bool] = None
    confidence_iterations: Optional[int] = None
    reduced_dim: int
    projection_eigenvalues: Optional[list[float]] = None


class EnhanceResponse(BaseModel):
    recovered: list[list[float]]
    label_names: list[str]
    metrics: Optional[MetricValues] = None
    diagnostics: EnhanceDiagnostics


class DegradeRequest(BaseModel):
    labels: list[list[float]]
    threshold: float


class DegradeResponse(BaseModel):
    labels: list[list[float]]


class EvaluateRequest(BaseModel):
    d_true: list[list[float]]
    d_pred: list[list[float]]


class SynthRequest(BaseModel):
    n: int
    d: int
    q: int
    noise: float = 0.0
    seed: int = 0


class HealthResponse(BaseModel):
    status: str
    version: str

"""Recover per-instance label distributions from binary logical labels.

The pipeline: build a k-NN similarity graph over instances, solve a
graph-smoothness QP for a support-restricted label-confidence matrix, reduce
feature dimensionality by maximizing kernel dependence with the confidences,
fit a softmax(relu(W x)) regressor on the reduced features, and read its
outputs back as the recovered distributions.
"""

__version__ = "0.1.0"

from .confidence import (
    ConfidenceMatrix,
    SmoothingOperator,
    build_smoother,
    init_confidence,
    project_restricted_simplex,
    smoothness_objective,
    solve_confidence,
)
from .dataset import (
    Dataset,
    degrade,
    load_dataset,
    load_distribution,
    save_dataset,
    save_distribution,
    threshold_labels,
)
from .errors import DataError, InfeasibleError, LabelEnhanceError, TrainingDivergedError
from .graph import NeighborGraph, build_graph, pairwise_sq_dists
from .metrics import MetricReport, average_ranks, report
from .model import LeModel, TrainConfig, forward, gradient, load_model, loss, recover, save_model, train
from .pipeline import (
    EnhanceResult,
    ExperimentConfig,
    enhance_dataset,
    run_degrade,
    run_enhance,
    run_eval,
    run_synth,
    standardize_features,
    synth_dataset,
)
from .reduction import (
    Projection,
    centering_matrix,
    hsic_value,
    label_kernel,
    project,
    solve_projection,
)

__all__ = [
    "__version__",
    "ConfidenceMatrix",
    "Dataset",
    "DataError",
    "EnhanceResult",
    "ExperimentConfig",
    "InfeasibleError",
    "LabelEnhanceError",
    "LeModel",
    "MetricReport",
    "NeighborGraph",
    "Projection",
    "SmoothingOperator",
    "TrainingDivergedError",
    "TrainConfig",
    "average_ranks",
    "build_graph",
    "build_smoother",
    "centering_matrix",
    "degrade",
    "enhance_dataset",
    "forward",
    "gradient",
    "hsic_value",
    "init_confidence",
    "label_kernel",
    "load_dataset",
    "load_distribution",
    "load_model",
    "loss",
    "pairwise_sq_dists",
    "project",
    "project_restricted_simplex",
    "recover",
    "report",
    "run_degrade",
    "run_enhance",
    "run_eval",
    "run_synth",
    "save_dataset",
    "save_distribution",
    "save_model",
    "smoothness_objective",
    "solve_confidence",
    "solve_projection",
    "standardize_features",
    "synth_dataset",
    "threshold_labels",
    "train",
]

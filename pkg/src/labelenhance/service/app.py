"""FastAPI service exposing the enhancement pipeline to HTTP clients."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..dataset import threshold_labels
from ..errors import DataError, InfeasibleError, TrainingDivergedError
from ..metrics import report
from ..pipeline import enhance_dataset, synth_dataset
from .schemas import (
    DatasetPayload,
    DegradeRequest,
    DegradeResponse,
    EnhanceDiagnostics,
    EnhanceRequest,
    EnhanceResponse,
    EvaluateRequest,
    HealthResponse,
    MetricValues,
    SynthRequest,
)

app = FastAPI(
    title="labelenhance",
    version=__version__,
    description="Recover per-instance label distributions from logical labels.",
)


@app.exception_handler(DataError)
async def data_error_handler(request: Request, exc: DataError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(InfeasibleError)
async def infeasible_handler(request: Request, exc: InfeasibleError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(TrainingDivergedError)
async def diverged_handler(request: Request, exc: TrainingDivergedError):
    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/enhance", response_model=EnhanceResponse)
def enhance(req: EnhanceRequest) -> EnhanceResponse:
    ds = req.dataset.to_dataset()
    result = enhance_dataset(ds, req.options.to_config())
    diag = EnhanceDiagnostics(
        confidence_converged=None if result.confidence is None else result.confidence.converged,
        confidence_iterations=None if result.confidence is None else result.confidence.n_iter,
        reduced_dim=result.reduced_features.shape[1],
        projection_eigenvalues=(
            None if result.projection is None else result.projection.eigenvalues.tolist()
        ),
    )
    return EnhanceResponse(
        recovered=result.recovered.tolist(),
        label_names=result.label_names,
        metrics=None if result.report is None else MetricValues(**result.report.to_dict()),
        diagnostics=diag,
    )


@app.post("/degrade", response_model=DegradeResponse)
def degrade(req: DegradeRequest) -> DegradeResponse:
    logical = threshold_labels(req.labels, req.threshold)
    return DegradeResponse(labels=logical.tolist())


@app.post("/evaluate", response_model=MetricValues)
def evaluate(req: EvaluateRequest) -> MetricValues:
    truth = np.asarray(req.d_true, dtype=float)
    pred = np.asarray(req.d_pred, dtype=float)
    return MetricValues(**report(truth, pred).to_dict())


@app.post("/synth", response_model=DatasetPayload)
def synth(req: SynthRequest) -> DatasetPayload:
    ds = synth_dataset(req.n, req.d, req.q, req.noise, req.seed)
    return DatasetPayload.from_dataset(ds)

"""Loading, validation, degradation and serialization of label-distribution data.

Instances are rows: features are an ``n x d`` matrix, labels an ``n x q``
matrix. Labels come in two kinds: ``distribution`` (nonnegative rows summing
to 1) and ``logical`` (binary rows with at least one positive). The single
interchange format is UTF-8 CSV with a header line whose columns are prefixed
``x_`` (features) or ``y_`` (labels).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

ROW_SUM_TOL = 1e-9
SAVE_SUM_TOL = 1e-6


def format_value(v: float) -> str:
    """Shortest decimal string that parses back to exactly the same float."""
    return np.format_float_positional(float(v), unique=True, trim="-")


@dataclass
class Dataset:
    """An in-memory LDL dataset: features, labels and column names."""

    features: np.ndarray
    labels: np.ndarray
    label_kind: str  # "distribution" | "logical"
    feature_names: list[str]
    label_names: list[str]

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def q(self) -> int:
        return self.labels.shape[1]

    def validate(self) -> "Dataset":
        if self.features.ndim != 2 or self.labels.ndim != 2:
            raise DataError("features and labels must be 2-d matrices")
        n, d = self.features.shape
        nl, q = self.labels.shape
        if nl != n:
            raise DataError(f"features have {n} rows but labels have {nl}")
        if n < 2:
            raise DataError(f"need at least 2 instances, got {n}")
        if d < 1:
            raise DataError("need at least 1 feature column")
        if q < 2:
            raise DataError(f"need at least 2 label columns, got {q}")
        if len(self.feature_names) != d or len(self.label_names) != q:
            raise DataError("column-name lists do not match matrix shapes")
        if not np.isfinite(self.features).all():
            bad = int(np.argwhere(~np.isfinite(self.features))[0][0])
            raise DataError(f"row {bad + 1}: non-finite feature value")
        if not np.isfinite(self.labels).all():
            bad = int(np.argwhere(~np.isfinite(self.labels))[0][0])
            raise DataError(f"row {bad + 1}: non-finite label value")
        if self.label_kind == "distribution":
            if (self.labels < 0).any() or (self.labels > 1).any():
                bad = int(np.argwhere((self.labels < 0) | (self.labels > 1))[0][0])
                raise DataError(f"row {bad + 1}: label degree outside [0,1]")
            sums = self.labels.sum(axis=1)
            off = np.abs(sums - 1.0) > ROW_SUM_TOL
            if off.any():
                bad = int(np.argmax(off))
                raise DataError(f"row {bad + 1} sums to {format_value(sums[bad])}")
        elif self.label_kind == "logical":
            if not np.isin(self.labels, (0.0, 1.0)).all():
                bad = int(np.argwhere(~np.isin(self.labels, (0.0, 1.0)))[0][0])
                raise DataError(f"row {bad + 1}: logical label not in {{0,1}}")
            empty = ~(self.labels > 0).any(axis=1)
            if empty.any():
                bad = int(np.argmax(empty))
                raise DataError(f"row {bad + 1}: logical row has no positive label")
        else:
            raise DataError(f"unknown label kind {self.label_kind!r}")
        return self


def infer_label_kind(labels: np.ndarray) -> str:
    """All entries in {0,1} means logical, anything else means distribution."""
    return "logical" if np.isin(labels, (0.0, 1.0)).all() else "distribution"


def load_dataset(path: str | Path, expected_kind: str | None = None) -> Dataset:
    """Load and validate a CSV dataset.

    The label kind is inferred from the values and, when ``expected_kind``
    is given, the dataset is validated against that kind instead (an
    all-one-hot file is a valid instance of either kind).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        x_idx, y_idx, feature_names, label_names = [], [], [], []
        for j, name in enumerate(header):
            name = name.strip()
            if name.startswith("x_"):
                x_idx.append(j)
                feature_names.append(name[2:])
            elif name.startswith("y_"):
                y_idx.append(j)
                label_names.append(name[2:])
            else:
                raise DataError(f"{path}: column {j + 1} ({name!r}) has neither x_ nor y_ prefix")
        rows_x, rows_y = [], []
        for i, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise DataError(f"{path}: row {i} has {len(row)} fields, expected {len(header)}")
            try:
                values = [float(v) for v in row]
            except ValueError as exc:
                raise DataError(f"{path}: row {i}: {exc}") from None
            rows_x.append([values[j] for j in x_idx])
            rows_y.append([values[j] for j in y_idx])
    features = np.asarray(rows_x, dtype=float).reshape(len(rows_x), len(x_idx))
    labels = np.asarray(rows_y, dtype=float).reshape(len(rows_y), len(y_idx))
    kind = expected_kind if expected_kind is not None else infer_label_kind(labels)
    if expected_kind is not None and expected_kind not in ("distribution", "logical"):
        raise DataError(f"unknown label kind {expected_kind!r}")
    ds = Dataset(features, labels, kind, feature_names, label_names)
    try:
        return ds.validate()
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def threshold_labels(degrees: np.ndarray, threshold: float) -> np.ndarray:
    """Binarize degrees: 1 where the degree exceeds the threshold.

    Every row additionally gets its argmax forced to 1 (first index on
    ties), so no row comes out all-zero.
    """
    if not 0.0 < threshold < 1.0:
        raise DataError(f"threshold must be in (0,1), got {threshold}")
    degrees = np.asarray(degrees, dtype=float)
    logical = (degrees > threshold).astype(float)
    top = np.argmax(degrees, axis=1)
    logical[np.arange(degrees.shape[0]), top] = 1.0
    return logical


def degrade(ds: Dataset, threshold: float) -> Dataset:
    """Turn a distribution dataset into a logical one by thresholding."""
    if ds.label_kind != "distribution":
        raise DataError("degrade expects a distribution dataset")
    logical = threshold_labels(ds.labels, threshold)
    out = Dataset(ds.features, logical, "logical", ds.feature_names, ds.label_names)
    return out.validate()


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Write a dataset as CSV (x_ feature columns, then y_ label columns)."""
    path = Path(path)
    header = [f"x_{s}" for s in ds.feature_names] + [f"y_{s}" for s in ds.label_names]
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for xi, yi in zip(ds.features, ds.labels):
                fields = [format_value(v) for v in xi] + [format_value(v) for v in yi]
                fh.write(",".join(fields) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def save_distribution(dist: np.ndarray, label_names: list[str], path: str | Path) -> None:
    """Write a recovered distribution matrix as a labels-only CSV.

    Round-tripping through load_dataset reproduces the values exactly
    (shortest-round-trip float formatting).
    """
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 2 or dist.shape[1] != len(label_names):
        raise DataError("distribution shape does not match label names")
    sums = dist.sum(axis=1)
    off = np.abs(sums - 1.0) > SAVE_SUM_TOL
    if off.any():
        bad = int(np.argmax(off))
        raise DataError(f"row {bad + 1} sums to {format_value(sums[bad])}")
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(f"y_{s}" for s in label_names) + "\n")
            for row in dist:
                fh.write(",".join(format_value(v) for v in row) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from None


def load_distribution(path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Read a labels-only CSV (or the label block of a full dataset)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        y_idx = [j for j, name in enumerate(header) if name.strip().startswith("y_")]
        if not y_idx:
            raise DataError(f"{path}: no y_ columns")
        names = [header[j].strip()[2:] for j in y_idx]
        rows = []
        for i, row in enumerate(reader, start=1):
            try:
                rows.append([float(row[j]) for j in y_idx])
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}: row {i}: {exc}") from None
    return np.asarray(rows, dtype=float).reshape(len(rows), len(y_idx)), names

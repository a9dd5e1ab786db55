"""Core dataset container, CSV ingestion and stratified splitting."""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    ParseError,
    SchemaError,
    SplitError,
    ValidationError,
)
from .validation import check_matrix, check_same_length, check_vector


class Dataset:
    """Immutable numeric feature matrix plus target vector.

    Features are stored column-major (Fortran order) because split finding
    scans one feature across all samples; that is the hot access pattern.
    Rejects NaN/Inf at construction.
    """

    def __init__(self, features, target, feature_names=None):
        X = check_matrix(features, "features")
        y = check_vector(target, "target")
        check_same_length(X, y)
        self._features = np.asfortranarray(X)
        self._features.flags.writeable = False
        self._target = np.array(y, dtype=np.float64)
        self._target.flags.writeable = False
        if feature_names is not None:
            feature_names = tuple(str(n) for n in feature_names)
            if len(feature_names) != X.shape[1]:
                raise ValidationError(
                    f"{len(feature_names)} feature names for {X.shape[1]} columns"
                )
        self.feature_names = feature_names

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def target(self) -> np.ndarray:
        return self._target

    @property
    def n_samples(self) -> int:
        return self._features.shape[0]

    @property
    def n_features(self) -> int:
        return self._features.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Contiguous read-only view of feature column ``j``."""
        return self._features[:, j]

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(self._features[idx], self._target[idx], self.feature_names)


@dataclass(frozen=True)
class TrainConfig:
    """User-facing training configuration.

    ``max_depth`` overrides the fingerprint-derived depth when set.
    ``n_iterations=0`` is allowed and produces a base-score-only model.
    """

    n_iterations: int = 100
    learning_rate: float = 0.1
    lambda_l2: float = 1.0
    lambda_l1: float = 0.0
    evolution_pressure: float = 0.1
    ema_decay: float = 0.05
    fast_mode: bool = True
    adaptive_lr: bool = True
    max_depth: int | None = None
    min_samples_leaf: int = 1
    early_stopping_rounds: int | None = None
    seed: int = 0

    def __post_init__(self):
        if int(self.n_iterations) != self.n_iterations or self.n_iterations < 0:
            raise ConfigError("n_iterations must be a non-negative integer")
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            raise ConfigError("learning_rate must be positive and finite")
        if self.lambda_l2 < 0:
            raise ConfigError("lambda_l2 must be >= 0")
        if self.lambda_l1 < 0:
            raise ConfigError("lambda_l1 must be >= 0")
        if self.evolution_pressure < 0:
            raise ConfigError("evolution_pressure must be >= 0")
        if not (0.0 < self.ema_decay < 1.0):
            raise ConfigError("ema_decay must lie in (0, 1)")
        if self.max_depth is not None and self.max_depth < 1:
            raise ConfigError("max_depth must be a positive integer when set")
        if self.min_samples_leaf < 1:
            raise ConfigError("min_samples_leaf must be >= 1")
        if self.early_stopping_rounds is not None and self.early_stopping_rounds < 1:
            raise ConfigError("early_stopping_rounds must be >= 1 when set")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")


def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cell {text!r} is not a number", row=row, column=col) from None
    if not math.isfinite(value):
        raise ParseError(f"cell {text!r} is not finite", row=row, column=col)
    return value


def load_csv(path, target_column, has_header: bool = True) -> Dataset:
    """Load a comma-delimited numeric CSV into a Dataset.

    ``target_column`` names a header column (requires ``has_header``) or
    gives a 0-based column index. Every selected cell must parse as a
    finite decimal float; offending cells raise ParseError with their
    1-based file coordinates.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    rows = [r for r in rows if r]  # drop trailing blank lines
    if not rows:
        raise SchemaError(f"{path}: file contains no rows")

    header = None
    first_data_row = 1
    if has_header:
        header = [c.strip() for c in rows[0]]
        data_rows = rows[1:]
        first_data_row = 2
    else:
        data_rows = rows

    if not data_rows:
        raise SchemaError(f"{path}: no data rows")
    width = len(rows[0])

    if isinstance(target_column, str):
        if header is None:
            raise SchemaError("a named target column requires a header row")
        if target_column not in header:
            raise SchemaError(f"target column {target_column!r} not found in header")
        target_idx = header.index(target_column)
    else:
        target_idx = int(target_column)
        if not (0 <= target_idx < width):
            raise SchemaError(
                f"target column index {target_idx} out of range for {width} columns"
            )
    if width < 2:
        raise SchemaError("dataset needs at least one feature column besides the target")

    matrix = np.empty((len(data_rows), width), dtype=np.float64)
    for i, row in enumerate(data_rows):
        file_row = first_data_row + i
        if len(row) != width:
            raise ParseError(
                f"ragged row: expected {width} cells, got {len(row)}",
                row=file_row,
                column=len(row) + 1,
            )
        for j, cell in enumerate(row):
            matrix[i, j] = _parse_cell(cell.strip(), file_row, j + 1)

    feature_cols = [j for j in range(width) if j != target_idx]
    names = None
    if header is not None:
        names = [header[j] for j in feature_cols]
    return Dataset(matrix[:, feature_cols], matrix[:, target_idx], names)


def save_csv(data: Dataset, path, target_name: str = "target") -> None:
    """Write a Dataset back to CSV with full-precision floats.

    Reloading the file yields bit-identical feature and target arrays.
    """
    names = data.feature_names or tuple(f"x{j}" for j in range(data.n_features))
    tmp_fd, tmp_path = tempfile.mkstemp(
        dir=os.path.dirname(os.path.abspath(path)) or ".", prefix=".morphboost-csv-"
    )
    try:
        with os.fdopen(tmp_fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(names) + [target_name])
            for i in range(data.n_samples):
                row = [repr(float(v)) for v in data.features[i]]
                row.append(repr(float(data.target[i])))
                writer.writerow(row)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _split_count(n: int, fraction: float) -> int:
    k = int(math.floor(n * fraction + 0.5))
    return min(max(k, 0), n - 1)


def _looks_like_classes(y: np.ndarray) -> bool:
    # Discrete enough to stratify: few unique values, and at least some
    # repetition (an all-distinct target is a regression target at any n).
    unique_count = np.unique(y).size
    return 1 < unique_count <= 20 and unique_count < y.size


def stratified_split(data: Dataset, test_fraction: float, seed: int):
    """Split into (train, test) Datasets, stratified by class.

    Class-like targets (at most 20 unique values, with repeats) are
    split per class so the test proportion of each class is within one
    sample of ``test_fraction``; continuous targets get a plain random
    split. Deterministic given ``seed``. Row order within each part
    follows the original dataset.
    """
    if not (0.0 < test_fraction < 1.0):
        raise ConfigError("test_fraction must lie in (0, 1)")
    if data.n_samples < 2:
        raise SplitError("cannot split a dataset with fewer than 2 samples")
    rng = np.random.default_rng(seed)
    y = data.target

    test_mask = np.zeros(data.n_samples, dtype=bool)
    if _looks_like_classes(y):
        labels = np.unique(y)
        for label in labels:
            if np.sum(y == label) < 2:
                raise SplitError(f"class {label} has fewer than 2 samples")
        for label in labels:
            idx = np.flatnonzero(y == label)
            n_test = _split_count(idx.size, test_fraction)
            chosen = rng.permutation(idx)[:n_test]
            test_mask[chosen] = True
        if not test_mask.any():
            # tiny classes can all round to zero; take one draw from the largest
            largest = max(labels, key=lambda c: np.sum(y == c))
            idx = np.flatnonzero(y == largest)
            test_mask[rng.permutation(idx)[:1]] = True
    else:
        n_test = max(1, _split_count(data.n_samples, test_fraction))
        chosen = rng.permutation(data.n_samples)[:n_test]
        test_mask[chosen] = True

    test_idx = np.flatnonzero(test_mask)
    train_idx = np.flatnonzero(~test_mask)
    return data.subset(train_idx), data.subset(test_idx)

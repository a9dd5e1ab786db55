"""Input validation helpers shared by the estimator facade and core ops."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, ValidationError


def check_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2D float64 array with at least one row and column."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"{name} must have at least one row and one column")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains NaN or infinite values")
    return arr


def check_vector(y, name: str = "y") -> np.ndarray:
    """Coerce to a 1D float64 array with at least one entry."""
    arr = np.asarray(y, dtype=np.float64).ravel()
    if arr.size < 1:
        raise ValidationError(f"{name} is empty")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains NaN or infinite values")
    return arr


def check_same_length(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] != y.shape[0]:
        raise ValidationError(
            f"feature rows ({X.shape[0]}) and target length ({y.shape[0]}) differ"
        )


def check_n_features(expected: int, X: np.ndarray) -> None:
    if X.shape[1] != expected:
        raise DimensionError(
            f"expected {expected} features, got {X.shape[1]}"
        )

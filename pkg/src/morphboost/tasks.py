"""Task-kind detection from raw target vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTargetError, ValidationError

REGRESSION = "regression"
BINARY = "binary"
MULTICLASS = "multiclass"

# Targets whose unique-value ratio exceeds this, or whose unique count
# exceeds 20, are treated as regression.
UNIQUE_RATIO_LIMIT = 0.05
UNIQUE_COUNT_LIMIT = 20


@dataclass(frozen=True)
class TaskKind:
    """One of regression, binary or multiclass classification."""

    kind: str
    n_classes: int | None = None

    def __post_init__(self):
        if self.kind not in (REGRESSION, BINARY, MULTICLASS):
            raise ValidationError(f"unknown task kind: {self.kind!r}")
        if self.kind == MULTICLASS and (self.n_classes is None or self.n_classes < 3):
            raise ValidationError("multiclass tasks need n_classes >= 3")
        if self.kind == BINARY and self.n_classes not in (None, 2):
            raise ValidationError("binary tasks have exactly 2 classes")
        if self.kind == BINARY and self.n_classes is None:
            object.__setattr__(self, "n_classes", 2)

    @classmethod
    def regression(cls) -> "TaskKind":
        return cls(REGRESSION)

    @classmethod
    def binary(cls) -> "TaskKind":
        return cls(BINARY, 2)

    @classmethod
    def multiclass(cls, n_classes: int) -> "TaskKind":
        return cls(MULTICLASS, int(n_classes))

    @property
    def is_classification(self) -> bool:
        return self.kind != REGRESSION


def detect_task(target) -> TaskKind:
    """Classify a target vector as regression, binary or multiclass.

    Regression is chosen when the unique-value ratio exceeds 5% of the
    sample count or when there are more than 20 unique values; otherwise
    two unique values mean binary and anything else multiclass.
    """
    y = np.asarray(target, dtype=np.float64).ravel()
    n = y.size
    if n < 1:
        raise ValidationError("target is empty")
    unique_count = np.unique(y).size
    if unique_count == 1:
        raise DegenerateTargetError("all target values are identical")
    if unique_count / n > UNIQUE_RATIO_LIMIT or unique_count > UNIQUE_COUNT_LIMIT:
        return TaskKind.regression()
    if unique_count == 2:
        return TaskKind.binary()
    return TaskKind.multiclass(unique_count)

"""Task-specific gradients, Hessians, base scores and evaluation losses.

Gradients/Hessians are first and second derivatives of the per-sample
loss with respect to the raw score: logistic loss for binary, softmax
cross-entropy for multiclass, squared error (times one half) for
regression.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .tasks import BINARY, MULTICLASS, REGRESSION, TaskKind

BASE_SCORE_CLAMP = 10.0


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax_rows(F: np.ndarray) -> np.ndarray:
    """Row-wise softmax with per-row max subtracted before exponentiation."""
    F = np.asarray(F, dtype=np.float64)
    shifted = F - F.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def binary_grad_hess(F: np.ndarray, y: np.ndarray):
    p = sigmoid(F)
    return p - y, p * (1.0 - p)


def multiclass_grad_hess(F: np.ndarray, y_onehot: np.ndarray):
    P = softmax_rows(F)
    return P - y_onehot, P * (1.0 - P)


def regression_grad_hess(F: np.ndarray, y: np.ndarray):
    return F - y, np.ones_like(F)


def one_hot(labels: np.ndarray, n_classes: int) -> np.ndarray:
    idx = np.asarray(labels, dtype=np.intp)
    out = np.zeros((idx.size, n_classes), dtype=np.float64)
    out[np.arange(idx.size), idx] = 1.0
    return out


def init_base_score(y: np.ndarray, task: TaskKind):
    """Initial raw score: target mean, clamped logit, or clamped log priors."""
    y = np.asarray(y, dtype=np.float64)
    if task.kind == REGRESSION:
        return float(y.mean())
    if task.kind == BINARY:
        rate = float(y.mean())
        with np.errstate(divide="ignore"):
            logit = np.log(rate) - np.log1p(-rate)
        return float(np.clip(logit, -BASE_SCORE_CLAMP, BASE_SCORE_CLAMP))
    counts = np.bincount(y.astype(np.intp), minlength=task.n_classes).astype(np.float64)
    with np.errstate(divide="ignore"):
        log_priors = np.log(counts / y.size)
    return np.clip(log_priors, -BASE_SCORE_CLAMP, BASE_SCORE_CLAMP)


def binary_log_loss(F: np.ndarray, y: np.ndarray) -> float:
    """Mean logistic loss of raw scores against 0/1 targets."""
    return float(np.mean(np.logaddexp(0.0, F) - y * F))


def multiclass_log_loss(F: np.ndarray, y_index: np.ndarray) -> float:
    """Mean softmax cross-entropy of raw score rows against class indices."""
    shifted = F - F.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    picked = shifted[np.arange(F.shape[0]), np.asarray(y_index, dtype=np.intp)]
    return float(np.mean(log_norm - picked))


def mean_squared_error(F: np.ndarray, y: np.ndarray) -> float:
    d = F - y
    return float(np.mean(d * d))


def eval_loss(task: TaskKind, raw, y) -> float:
    """Task loss used for history records and early-stopping tracking."""
    if task.kind == REGRESSION:
        return mean_squared_error(raw, y)
    if task.kind == BINARY:
        return binary_log_loss(raw, y)
    if task.kind == MULTICLASS:
        return multiclass_log_loss(raw, y)
    raise ValidationError(f"unknown task kind {task.kind!r}")

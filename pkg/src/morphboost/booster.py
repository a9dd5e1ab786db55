"""The boosting loop: gradients, morph-state updates, trees, early stopping."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset, TrainConfig
from .errors import DimensionError, TaskError, ValidationError
from .fingerprint import ProblemFingerprint, fingerprint_dataset
from .losses import (
    binary_grad_hess,
    eval_loss,
    init_base_score,
    multiclass_grad_hess,
    one_hot,
    regression_grad_hess,
    sigmoid,
    softmax_rows,
)
from .morph import DEFAULT_TUNING, MorphState, MorphTuning, learning_rate
from .predict import predict_raw, predict_tree_batch
from .tasks import BINARY, MULTICLASS, REGRESSION, TaskKind, detect_task
from .tree import SplitNode, Tree, build_tree

FORMAT_VERSION = 1

# Per-tree importance weighting: later trees count up to 1.5x, and
# contributions decay by 0.9 per level while descending.
IMPORTANCE_LATE_TREE_BONUS = 0.5
IMPORTANCE_CHILD_DECAY = 0.9
INTERACTION_CREDIT = 0.3


@dataclass
class HistoryRecord:
    iteration: int
    train_loss: float
    learning_rate: float
    mean_tree_depth: float


@dataclass
class BoosterModel:
    """Fitted ensemble: ordered trees, base score and training metadata."""

    task: TaskKind
    trees: list[Tree]
    base_score: float | np.ndarray
    fingerprint: ProblemFingerprint
    config: TrainConfig
    history: list[HistoryRecord] = field(default_factory=list)
    importance: np.ndarray | None = None
    n_features: int = 0
    feature_names: tuple | None = None
    label_map: np.ndarray | None = None
    best_iteration: int | None = None
    format_version: int = FORMAT_VERSION

    @property
    def trees_per_iteration(self) -> int:
        return self.task.n_classes if self.task.kind == MULTICLASS else 1

    @property
    def n_iterations_trained(self) -> int:
        return len(self.trees) // self.trees_per_iteration


def _map_labels(y: np.ndarray, label_map: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(label_map, y)
    pos = np.clip(pos, 0, label_map.size - 1)
    if not np.array_equal(label_map[pos], y):
        raise ValidationError("target contains class labels outside the training label set")
    return pos.astype(np.float64)


def fit(
    train: Dataset,
    config: TrainConfig,
    eval_set: Dataset | None = None,
    tuning: MorphTuning = DEFAULT_TUNING,
    task: TaskKind | None = None,
) -> BoosterModel:
    """Train a MorphBoost ensemble.

    The task is auto-detected from the target unless given explicitly.
    When ``eval_set`` is present the validation loss is tracked each
    iteration; with ``early_stopping_rounds`` set, training stops after
    that many non-improving rounds and the ensemble is truncated to the
    best iteration. Deterministic given (data, config, seed).
    """
    if task is None:
        task = detect_task(train.target)
    fingerprint = fingerprint_dataset(
        train, config.fast_mode, config.seed, config.max_depth
    )
    if fingerprint.task != task:
        fingerprint = replace(fingerprint, task=task)

    label_map = None
    y = train.target
    if task.is_classification:
        label_map = np.unique(train.target)
        if label_map.size != task.n_classes:
            raise ValidationError(
                f"target has {label_map.size} classes, task expects {task.n_classes}"
            )
        y = _map_labels(train.target, label_map)

    n = train.n_samples
    K = task.n_classes if task.kind == MULTICLASS else 1
    base_score = init_base_score(y, task)

    if task.kind == MULTICLASS:
        F = np.tile(base_score, (n, 1))
        Y = one_hot(y, K)
    else:
        F = np.full(n, float(base_score))

    eval_y = None
    F_val = None
    if eval_set is not None:
        if eval_set.n_features != train.n_features:
            raise DimensionError(
                f"expected {train.n_features} features in eval_set, "
                f"got {eval_set.n_features}"
            )
        eval_y = eval_set.target
        if task.is_classification:
            eval_y = _map_labels(eval_set.target, label_map)
        if task.kind == MULTICLASS:
            F_val = np.tile(base_score, (eval_set.n_samples, 1))
        else:
            F_val = np.full(eval_set.n_samples, float(base_score))

    state = MorphState(config.ema_decay, config.n_iterations, config.evolution_pressure)
    trees: list[Tree] = []
    history: list[HistoryRecord] = []
    best_loss = np.inf
    best_iteration = None
    stalled = 0
    stopped_early = False

    for t in range(config.n_iterations):
        state.t = t
        lr_t = learning_rate(t, config.n_iterations, config.learning_rate, config.adaptive_lr)

        if task.kind == MULTICLASS:
            G, H = multiclass_grad_hess(F, Y)
            grads = [G[:, k] for k in range(K)]
            hesses = [H[:, k] for k in range(K)]
        elif task.kind == BINARY:
            g, h = binary_grad_hess(F, y)
            grads, hesses = [g], [h]
        else:
            g, h = regression_grad_hess(F, y)
            grads, hesses = [g], [h]

        for g_k in grads:
            state.update(g_k)

        iteration_trees = []
        for k in range(K):
            tree = build_tree(
                train,
                grads[k],
                hesses[k],
                state,
                lr_t,
                fingerprint,
                config,
                tuning,
                class_index=k if task.kind == MULTICLASS else None,
            )
            update = predict_tree_batch(tree, train.features)
            if task.kind == MULTICLASS:
                F[:, k] += update
            else:
                F += update
            if F_val is not None:
                val_update = predict_tree_batch(tree, eval_set.features)
                if task.kind == MULTICLASS:
                    F_val[:, k] += val_update
                else:
                    F_val += val_update
            iteration_trees.append(tree)
        trees.extend(iteration_trees)

        history.append(
            HistoryRecord(
                iteration=t,
                train_loss=eval_loss(task, F, y),
                learning_rate=lr_t,
                mean_tree_depth=float(np.mean([tr.max_depth() for tr in iteration_trees])),
            )
        )

        if F_val is not None:
            val_loss = eval_loss(task, F_val, eval_y)
            if val_loss < best_loss:
                best_loss = val_loss
                best_iteration = t
                stalled = 0
            else:
                stalled += 1
                if (
                    config.early_stopping_rounds is not None
                    and stalled >= config.early_stopping_rounds
                ):
                    stopped_early = True
                    break

    if stopped_early and best_iteration is not None:
        trees = trees[: (best_iteration + 1) * K]

    model = BoosterModel(
        task=task,
        trees=trees,
        base_score=base_score,
        fingerprint=fingerprint,
        config=config,
        history=history,
        n_features=train.n_features,
        feature_names=train.feature_names,
        label_map=label_map,
        best_iteration=best_iteration,
    )
    model.importance = feature_importance(model)
    return model


def predict(model: BoosterModel, features) -> np.ndarray:
    """Labels for classification models, raw values for regression."""
    raw = predict_raw(model, features)
    if model.task.kind == REGRESSION:
        return raw
    if model.task.kind == BINARY:
        # threshold at probability 0.5, i.e. raw score 0; ties go to class 0
        return model.label_map[(raw > 0).astype(np.intp)]
    return model.label_map[np.argmax(raw, axis=1)]


def predict_proba(model: BoosterModel, features) -> np.ndarray:
    """Class probability matrix (n, K); rows sum to one."""
    if not model.task.is_classification:
        raise TaskError("predict_proba requires a classification model")
    raw = predict_raw(model, features)
    if model.task.kind == BINARY:
        p = sigmoid(raw)
        return np.column_stack([1.0 - p, p])
    return softmax_rows(raw)


def _accumulate_importance(node, weight, ancestors, out):
    if not isinstance(node, SplitNode):
        return
    contribution = weight * node.morph_score * node.gain
    out[node.feature] += contribution
    for ancestor_feature, ancestor_contribution in ancestors:
        if ancestor_feature != node.feature:
            out[node.feature] += INTERACTION_CREDIT * ancestor_contribution
    child_ancestors = ancestors + ((node.feature, contribution),)
    child_weight = weight * IMPORTANCE_CHILD_DECAY
    _accumulate_importance(node.left, child_weight, child_ancestors, out)
    _accumulate_importance(node.right, child_weight, child_ancestors, out)


def feature_importance(model: BoosterModel) -> np.ndarray:
    """Interaction-aware gain importance, normalized to sum to one.

    Each split contributes tree_weight * morph_score * gain to its
    feature, trees later in training weigh up to 1.5x, contributions
    decay 0.9 per level, and features splitting below a different
    ancestor feature receive 0.3 of that ancestor's contribution.
    Returns the zero vector for models without any split.
    """
    out = np.zeros(model.n_features, dtype=np.float64)
    per_iter = model.trees_per_iteration
    total = max(1, model.config.n_iterations)
    for index, tree in enumerate(model.trees):
        t = index // per_iter
        tree_weight = 1.0 + IMPORTANCE_LATE_TREE_BONUS * (t / total)
        _accumulate_importance(tree.root, tree_weight, (), out)
    mass = out.sum()
    if mass > 0:
        out /= mass
    return out

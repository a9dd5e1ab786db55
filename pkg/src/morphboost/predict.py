"""Tree traversal: batch queue-based prediction plus a recursive reference.

The batch path keeps a FIFO queue of (node, sample indices) pairs,
partitions index sets at splits via boolean masks and writes leaf values
in bulk, so a whole sample batch flows through each tree level by level.
The per-sample recursive walker is retained as the correctness oracle.
"""

from __future__ import annotations

from collections import deque
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionError, EmptyModelError
from .tasks import MULTICLASS
from .tree import LeafNode, Tree
from .validation import check_matrix

if TYPE_CHECKING:  # pragma: no cover
    from .booster import BoosterModel


def predict_tree_batch(tree: Tree, features) -> np.ndarray:
    """Evaluate one tree over all rows via level-order queue traversal."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != tree.n_features:
        raise DimensionError(
            f"expected {tree.n_features} features, got "
            f"{X.shape[1] if X.ndim == 2 else 'non-matrix input'}"
        )
    n = X.shape[0]
    out = np.empty(n, dtype=np.float64)
    queue = deque([(tree.root, np.arange(n, dtype=np.intp))])
    while queue:
        node, idx = queue.popleft()
        if isinstance(node, LeafNode):
            out[idx] = node.value
            continue
        mask = X[:, node.feature][idx] <= node.threshold
        left_idx = idx[mask]
        right_idx = idx[~mask]
        if left_idx.size:
            queue.append((node.left, left_idx))
        if right_idx.size:
            queue.append((node.right, right_idx))
    return out


def predict_tree_recursive(tree: Tree, row) -> float:
    """Root-to-leaf descent for a single sample (test oracle path)."""
    r = np.asarray(row, dtype=np.float64).ravel()
    if r.size != tree.n_features:
        raise DimensionError(f"expected {tree.n_features} features, got {r.size}")
    node = tree.root
    while not isinstance(node, LeafNode):
        node = node.left if r[node.feature] <= node.threshold else node.right
    return float(node.value)


def predict_raw(model: "BoosterModel", features) -> np.ndarray:
    """Ensemble raw scores: base score plus the sum of tree outputs.

    Leaf values already carry the learning rate and shrinkage factors,
    so trees are summed without further scaling. Returns an (n, K)
    matrix for multiclass models, a length-n vector otherwise.
    """
    X = check_matrix(features, "features")
    if X.shape[1] != model.n_features:
        raise DimensionError(f"expected {model.n_features} features, got {X.shape[1]}")
    if not model.trees and model.base_score is None:
        raise EmptyModelError("model has no trees and no base score")
    n = X.shape[0]
    if model.task.kind == MULTICLASS:
        F = np.tile(np.asarray(model.base_score, dtype=np.float64), (n, 1))
        for tree in model.trees:
            F[:, tree.class_index] += predict_tree_batch(tree, X)
        return F
    raw = np.full(n, float(model.base_score), dtype=np.float64)
    for tree in model.trees:
        raw += predict_tree_batch(tree, X)
    return raw

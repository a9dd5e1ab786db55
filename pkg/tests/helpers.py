"""Shared test utilities: random trees, hand-built models, and an
independent brute-force second-order GBDT oracle."""

import math

import numpy as np

from morphboost.booster import BoosterModel
from morphboost.data import Dataset, TrainConfig
from morphboost.fingerprint import ProblemFingerprint
from morphboost.morph import MorphState
from morphboost.tasks import TaskKind
from morphboost.tree import LeafNode, SplitNode, Tree


def make_state(t=0, total=100, mean=0.0, std=1.0, decay=0.05, pressure=0.0,
               initialized=True):
    state = MorphState(decay, total, pressure)
    state.mean = mean
    state.std = std
    state.t = t
    state.initialized = initialized
    return state


def make_fingerprint(max_depth=8, task=None):
    return ProblemFingerprint(
        task=task or TaskKind.regression(),
        complexity=0.25,
        non_linearity=0.2,
        interaction_strength=0.15,
        noise_level=0.1,
        effective_max_depth=max_depth,
    )


def random_tree(rng, n_features, max_depth=8, split_prob=0.8):
    """Random tree with the documented depth/threshold structure."""

    def build(depth):
        if depth >= max_depth or rng.random() > split_prob:
            return LeafNode(value=float(rng.standard_normal()), n_samples=1, depth=depth)
        return SplitNode(
            feature=int(rng.integers(n_features)),
            threshold=float(rng.standard_normal()),
            gain=float(rng.random()) + 1e-6,
            morph_score=float(rng.random()),
            depth=depth,
            left=build(depth + 1),
            right=build(depth + 1),
        )

    return Tree(root=build(0), n_features=n_features)


def stump(feature, threshold, left_value, right_value, n_features,
          gain=1.0, morph_score=1.0, class_index=None):
    root = SplitNode(
        feature=feature,
        threshold=threshold,
        gain=gain,
        morph_score=morph_score,
        depth=0,
        left=LeafNode(value=left_value, n_samples=1, depth=1),
        right=LeafNode(value=right_value, n_samples=1, depth=1),
    )
    return Tree(root=root, n_features=n_features, class_index=class_index)


def manual_model(trees, n_features, base_score=0.0, task=None, n_iterations=None,
                 label_map=None):
    """Hand-built BoosterModel for importance and predict_raw tests."""
    task = task or TaskKind.regression()
    config = TrainConfig(n_iterations=n_iterations if n_iterations is not None else max(1, len(trees)))
    model = BoosterModel(
        task=task,
        trees=list(trees),
        base_score=base_score,
        fingerprint=make_fingerprint(task=task),
        config=config,
        n_features=n_features,
        label_map=np.asarray(label_map, dtype=np.float64) if label_map is not None else None,
    )
    return model


# ---------------------------------------------------------------------------
# Independent second-order GBDT oracle: exhaustive split enumeration over
# midpoints, canonical gain G^2/(H + lambda), leaves -lr * G/(H + lambda).
# ---------------------------------------------------------------------------


def _oracle_leaf(g, h, lam, lr):
    return {"kind": "leaf", "value": lr * (-(g.sum()) / (h.sum() + lam))}


def _oracle_build(X, g, h, lam, lr, max_depth, min_leaf, depth):
    n = g.size
    if depth >= max_depth or n < 2 * min_leaf:
        return _oracle_leaf(g, h, lam, lr)
    parent_score = g.sum() ** 2 / (h.sum() + lam)
    best = None
    for j in range(X.shape[1]):
        uniq = np.unique(X[:, j])
        for thr in (uniq[1:] + uniq[:-1]) / 2.0:
            mask = X[:, j] <= thr
            n_l = int(mask.sum())
            if n_l < min_leaf or n - n_l < min_leaf:
                continue
            gl, hl = g[mask], h[mask]
            gr, hr = g[~mask], h[~mask]
            gain = (
                gl.sum() ** 2 / (hl.sum() + lam)
                + gr.sum() ** 2 / (hr.sum() + lam)
                - parent_score
            )
            if best is None or gain > best[0]:
                best = (gain, j, float(thr))
    if best is None or best[0] <= 0.0:
        return _oracle_leaf(g, h, lam, lr)
    gain, feature, threshold = best
    mask = X[:, feature] <= threshold
    return {
        "kind": "split",
        "feature": feature,
        "threshold": threshold,
        "left": _oracle_build(X[mask], g[mask], h[mask], lam, lr, max_depth, min_leaf, depth + 1),
        "right": _oracle_build(X[~mask], g[~mask], h[~mask], lam, lr, max_depth, min_leaf, depth + 1),
    }


def _oracle_eval(node, X):
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        cur = node
        while cur["kind"] == "split":
            cur = cur["left"] if X[i, cur["feature"]] <= cur["threshold"] else cur["right"]
        out[i] = cur["value"]
    return out


def oracle_fit(X, y, task_kind, n_iterations, lr, lam, max_depth, min_leaf=1):
    """Plain second-order boosting with exhaustive split search."""
    n = X.shape[0]
    if task_kind == "regression":
        base = float(np.mean(y))
    else:
        rate = float(np.mean(y))
        base = max(-10.0, min(10.0, math.log(rate / (1.0 - rate))))
    F = np.full(n, base)
    trees = []
    for _ in range(n_iterations):
        if task_kind == "regression":
            g = F - y
            h = np.ones(n)
        else:
            p = 1.0 / (1.0 + np.exp(-F))
            g = p - y
            h = p * (1.0 - p)
        tree = _oracle_build(X, g, h, lam, lr, max_depth, min_leaf, 0)
        F = F + _oracle_eval(tree, X)
        trees.append(tree)
    return base, trees


def assert_same_structure(node, oracle_node, atol=1e-12):
    """Recursively compare a built tree against an oracle tree."""
    if oracle_node["kind"] == "leaf":
        assert isinstance(node, LeafNode), f"expected leaf, got split at depth {node.depth}"
        assert math.isclose(node.value, oracle_node["value"], rel_tol=1e-12, abs_tol=atol), (
            node.value,
            oracle_node["value"],
        )
        return
    assert isinstance(node, SplitNode), "expected split, got leaf"
    assert node.feature == oracle_node["feature"]
    assert node.threshold == oracle_node["threshold"], (node.threshold, oracle_node["threshold"])
    assert_same_structure(node.left, oracle_node["left"], atol)
    assert_same_structure(node.right, oracle_node["right"], atol)


def random_dataset(rng, n, d):
    X = rng.standard_normal((n, d))
    return X


def small_blobs(rng, n_per=30, centers=((-3.0, -3.0), (3.0, 3.0))):
    """Well-separated two-class data for exact-fit checks."""
    parts = []
    labels = []
    for c, center in enumerate(centers):
        parts.append(np.asarray(center) + 0.3 * rng.standard_normal((n_per, 2)))
        labels.append(np.full(n_per, float(c)))
    return Dataset(np.vstack(parts), np.concatenate(labels))

"""Versioned JSON model files with exact float round-trips.

The schema is documented in docs/FORMAT.md. Floats are emitted via
Python's shortest-round-trip repr, so reloading reproduces every value
bit for bit and predictions match exactly.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .booster import FORMAT_VERSION, BoosterModel, HistoryRecord
from .data import TrainConfig
from .errors import FormatError
from .fingerprint import ProblemFingerprint
from .tasks import TaskKind
from .tree import LeafNode, SplitNode, Tree


def _flatten_nodes(root) -> list[dict]:
    nodes: list[dict] = []

    def visit(node) -> int:
        index = len(nodes)
        if isinstance(node, LeafNode):
            nodes.append(
                {
                    "kind": "leaf",
                    "value": float(node.value),
                    "n_samples": int(node.n_samples),
                    "depth": int(node.depth),
                }
            )
            return index
        nodes.append(
            {
                "kind": "split",
                "feature": int(node.feature),
                "threshold": float(node.threshold),
                "gain": float(node.gain),
                "morph_score": float(node.morph_score),
                "depth": int(node.depth),
                "left": -1,
                "right": -1,
            }
        )
        nodes[index]["left"] = visit(node.left)
        nodes[index]["right"] = visit(node.right)
        return index

    visit(root)
    return nodes


def _rebuild_nodes(records: list[dict], index: int = 0):
    record = records[index]
    if record["kind"] == "leaf":
        return LeafNode(
            value=float(record["value"]),
            n_samples=int(record["n_samples"]),
            depth=int(record["depth"]),
        )
    if record["kind"] != "split":
        raise FormatError(f"unknown node kind {record['kind']!r}")
    return SplitNode(
        feature=int(record["feature"]),
        threshold=float(record["threshold"]),
        gain=float(record["gain"]),
        morph_score=float(record["morph_score"]),
        depth=int(record["depth"]),
        left=_rebuild_nodes(records, record["left"]),
        right=_rebuild_nodes(records, record["right"]),
    )


def model_to_dict(model: BoosterModel) -> dict:
    base = model.base_score
    if isinstance(base, np.ndarray):
        base = [float(v) for v in base]
    else:
        base = float(base)
    return {
        "format_version": model.format_version,
        "task": {"kind": model.task.kind, "n_classes": model.task.n_classes},
        "n_features": int(model.n_features),
        "feature_names": list(model.feature_names) if model.feature_names else None,
        "label_map": [float(v) for v in model.label_map]
        if model.label_map is not None
        else None,
        "base_score": base,
        "config": {
            "n_iterations": model.config.n_iterations,
            "learning_rate": model.config.learning_rate,
            "lambda_l2": model.config.lambda_l2,
            "lambda_l1": model.config.lambda_l1,
            "evolution_pressure": model.config.evolution_pressure,
            "ema_decay": model.config.ema_decay,
            "fast_mode": model.config.fast_mode,
            "adaptive_lr": model.config.adaptive_lr,
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
            "early_stopping_rounds": model.config.early_stopping_rounds,
            "seed": model.config.seed,
        },
        "fingerprint": {
            "complexity": float(model.fingerprint.complexity),
            "non_linearity": float(model.fingerprint.non_linearity),
            "interaction_strength": float(model.fingerprint.interaction_strength),
            "noise_level": float(model.fingerprint.noise_level),
            "effective_max_depth": int(model.fingerprint.effective_max_depth),
        },
        "trees": [
            {
                "class_index": tree.class_index,
                "interactions": sorted([int(a), int(b)] for a, b in tree.interactions),
                "nodes": _flatten_nodes(tree.root),
            }
            for tree in model.trees
        ],
        "history": [
            {
                "iteration": rec.iteration,
                "train_loss": float(rec.train_loss),
                "learning_rate": float(rec.learning_rate),
                "mean_tree_depth": float(rec.mean_tree_depth),
            }
            for rec in model.history
        ],
        "importance": [float(v) for v in model.importance]
        if model.importance is not None
        else None,
        "best_iteration": model.best_iteration,
    }


def model_from_dict(payload: dict) -> BoosterModel:
    try:
        version = payload["format_version"]
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported format_version {version!r}")
        task = TaskKind(payload["task"]["kind"], payload["task"]["n_classes"])
        config = TrainConfig(**payload["config"])
        fp = payload["fingerprint"]
        fingerprint = ProblemFingerprint(
            task=task,
            complexity=fp["complexity"],
            non_linearity=fp["non_linearity"],
            interaction_strength=fp["interaction_strength"],
            noise_level=fp["noise_level"],
            effective_max_depth=fp["effective_max_depth"],
        )
        trees = []
        for entry in payload["trees"]:
            trees.append(
                Tree(
                    root=_rebuild_nodes(entry["nodes"]),
                    n_features=int(payload["n_features"]),
                    class_index=entry["class_index"],
                    interactions=frozenset(
                        (int(a), int(b)) for a, b in entry["interactions"]
                    ),
                )
            )
        base = payload["base_score"]
        if isinstance(base, list):
            base = np.asarray(base, dtype=np.float64)
        label_map = payload["label_map"]
        if label_map is not None:
            label_map = np.asarray(label_map, dtype=np.float64)
        importance = payload["importance"]
        if importance is not None:
            importance = np.asarray(importance, dtype=np.float64)
        history = [
            HistoryRecord(
                iteration=int(rec["iteration"]),
                train_loss=float(rec["train_loss"]),
                learning_rate=float(rec["learning_rate"]),
                mean_tree_depth=float(rec["mean_tree_depth"]),
            )
            for rec in payload["history"]
        ]
        names = payload["feature_names"]
        return BoosterModel(
            task=task,
            trees=trees,
            base_score=base,
            fingerprint=fingerprint,
            config=config,
            history=history,
            importance=importance,
            n_features=int(payload["n_features"]),
            feature_names=tuple(names) if names else None,
            label_map=label_map,
            best_iteration=payload["best_iteration"],
            format_version=int(version),
        )
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"corrupt model file: {exc}") from exc


def save_model(model: BoosterModel, path) -> None:
    """Serialize a model to ``path`` atomically (temp file plus rename)."""
    text = json.dumps(model_to_dict(model), allow_nan=False, indent=1)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".morphboost-model-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def load_model(path) -> BoosterModel:
    """Load a model file; raises FormatError on corrupt or foreign files."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a valid model file: {exc}") from exc
    if not isinstance(payload, dict):
        raise FormatError("not a valid model file: top-level value is not an object")
    return model_from_dict(payload)

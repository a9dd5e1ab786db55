"""MorphBoost: gradient boosting with iteration-morphing split criteria.

Trees evaluated under a split score that evolves with accumulated
gradient statistics, automatic dataset fingerprinting, warm-up/cosine
learning-rate schedules, and queue-based batch tree prediction.
"""

from .booster import (
    BoosterModel,
    HistoryRecord,
    feature_importance,
    fit,
    predict,
    predict_proba,
)
from .data import Dataset, TrainConfig, load_csv, save_csv, stratified_split
from .datasets import SyntheticSpec, default_suite, generate
from .bench import BenchResult, run_suite, write_csv
from .errors import (
    ConfigError,
    DegenerateTargetError,
    DimensionError,
    EmptyModelError,
    FormatError,
    MorphBoostError,
    ParseError,
    SchemaError,
    SpecError,
    SplitError,
    TaskError,
    ValidationError,
)
from .estimator import MorphBoostClassifier, MorphBoostRegressor
from .fingerprint import (
    ProblemFingerprint,
    complexity,
    derive_depth,
    fingerprint_dataset,
    interaction_strength,
    noise_level,
    non_linearity,
)
from .model_io import load_model, save_model
from .morph import MorphState, MorphTuning, NodeScoreParts, learning_rate, node_score, per_sample_scores
from .predict import predict_raw, predict_tree_batch, predict_tree_recursive
from .tasks import TaskKind, detect_task
from .tree import LeafNode, SplitNode, Tree, build_tree, candidate_thresholds, evaluate_split, leaf_value

__version__ = "0.1.0"

__all__ = [
    "BenchResult",
    "BoosterModel",
    "ConfigError",
    "Dataset",
    "DegenerateTargetError",
    "DimensionError",
    "EmptyModelError",
    "FormatError",
    "HistoryRecord",
    "LeafNode",
    "MorphBoostClassifier",
    "MorphBoostError",
    "MorphBoostRegressor",
    "MorphState",
    "MorphTuning",
    "NodeScoreParts",
    "ParseError",
    "ProblemFingerprint",
    "SchemaError",
    "SpecError",
    "SplitError",
    "SplitNode",
    "SyntheticSpec",
    "TaskError",
    "TaskKind",
    "TrainConfig",
    "Tree",
    "ValidationError",
    "build_tree",
    "candidate_thresholds",
    "complexity",
    "default_suite",
    "derive_depth",
    "detect_task",
    "evaluate_split",
    "feature_importance",
    "fingerprint_dataset",
    "fit",
    "generate",
    "interaction_strength",
    "leaf_value",
    "learning_rate",
    "load_csv",
    "load_model",
    "node_score",
    "noise_level",
    "non_linearity",
    "per_sample_scores",
    "predict",
    "predict_proba",
    "predict_raw",
    "predict_tree_batch",
    "predict_tree_recursive",
    "run_suite",
    "save_csv",
    "save_model",
    "stratified_split",
    "write_csv",
]

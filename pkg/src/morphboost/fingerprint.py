"""Pre-training dataset analysis and derived internal parameters.

Fast mode skips the correlation-based estimators and uses fixed heuristic
values; only the complexity statistic is always computed from the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .tasks import TaskKind, detect_task

EPS = 1e-10

FAST_NON_LINEARITY = 0.2
FAST_INTERACTION_STRENGTH = 0.15
FAST_NOISE_LEVEL = 0.1
FAST_MAX_DEPTH = 8

# Correlation-based estimators look at no more than this many features/pairs.
MAX_SAMPLED_FEATURES = 10
MAX_SAMPLED_PAIRS = 10


@dataclass(frozen=True)
class ProblemFingerprint:
    """Detected task plus the scalars driving auto-configuration."""

    task: TaskKind
    complexity: float
    non_linearity: float
    interaction_strength: float
    noise_level: float
    effective_max_depth: int


def complexity(data: Dataset) -> float:
    """Mean over features of population std divided by value range.

    Constant features contribute 0; the epsilon keeps the ratio defined
    when a feature's range collapses.
    """
    X = data.features
    stds = X.std(axis=0)
    ranges = X.max(axis=0) - X.min(axis=0)
    return float(np.mean(stds / (ranges + EPS)))


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    ac = a - a.mean()
    bc = b - b.mean()
    denom = np.sqrt(np.sum(ac * ac) * np.sum(bc * bc))
    if denom == 0.0:
        return 0.0
    return float(np.clip(np.sum(ac * bc) / denom, -1.0, 1.0))


def _sample_features(n_features: int, seed: int, cap: int = MAX_SAMPLED_FEATURES):
    if n_features <= cap:
        return np.arange(n_features)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(n_features, size=cap, replace=False))


def non_linearity(data: Dataset, seed: int) -> float:
    """How much squared features outpredict raw ones, in [0, 1].

    For up to 10 sampled features, compares |corr(x^2, y)| against
    |corr(x, y)| and averages the positive excess. Zero-variance
    features are skipped.
    """
    y = data.target
    scores = []
    for j in _sample_features(data.n_features, seed):
        x = data.column(j)
        if x.std() == 0.0:
            continue
        r_lin = abs(_pearson(x, y))
        r_quad = abs(_pearson(x * x, y))
        scores.append(max(0.0, r_quad - r_lin))
    if not scores:
        return 0.0
    return float(np.clip(np.mean(scores), 0.0, 1.0))


def _sample_pairs(n_features: int, seed: int, cap: int = MAX_SAMPLED_PAIRS):
    pairs = [(j, k) for j in range(n_features) for k in range(j + 1, n_features)]
    if len(pairs) <= cap:
        return pairs
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(pairs), size=cap, replace=False)
    return [pairs[i] for i in np.sort(picked)]


def interaction_strength(data: Dataset, seed: int) -> float:
    """Excess correlation of feature products over their parts, in [0, 1]."""
    if data.n_features < 2:
        return 0.0
    y = data.target
    scores = []
    for j, k in _sample_pairs(data.n_features, seed):
        xj = data.column(j)
        xk = data.column(k)
        r_pair = abs(_pearson(xj * xk, y))
        r_solo = max(abs(_pearson(xj, y)), abs(_pearson(xk, y)))
        scores.append(max(0.0, r_pair - r_solo))
    if not scores:
        return 0.0
    return float(np.clip(np.mean(scores), 0.0, 1.0))


def noise_level(data: Dataset, seed: int) -> float:
    """One minus the best single-feature |correlation| with the target."""
    y = data.target
    best = 0.0
    for j in _sample_features(data.n_features, seed):
        best = max(best, abs(_pearson(data.column(j), y)))
    return float(np.clip(1.0 - best, 0.0, 1.0))


def derive_depth(complexity_value: float, fast_mode: bool, override: int | None = None) -> int:
    """Effective tree depth limit: override wins, fast mode pins 8.

    In standard mode the limit grows with complexity, from 3 up to 10.
    """
    if override is not None:
        return int(override)
    if fast_mode:
        return FAST_MAX_DEPTH
    c_norm = min(1.0, complexity_value / 0.5)
    return int(np.clip(int(np.floor(4.0 + 12.0 * c_norm + 0.5)), 3, 10))


def fingerprint_dataset(
    data: Dataset,
    fast_mode: bool = True,
    seed: int = 0,
    max_depth_override: int | None = None,
) -> ProblemFingerprint:
    """Analyze a dataset before training.

    Standard mode runs the correlation estimators (they need n >= 3;
    smaller datasets fall back to the fast-mode constants).
    """
    task = detect_task(data.target)
    c = complexity(data)
    if fast_mode or data.n_samples < 3:
        non_lin = FAST_NON_LINEARITY
        inter = FAST_INTERACTION_STRENGTH
        noise = FAST_NOISE_LEVEL
    else:
        non_lin = non_linearity(data, seed)
        inter = interaction_strength(data, seed)
        noise = noise_level(data, seed)
    depth = derive_depth(c, fast_mode, max_depth_override)
    return ProblemFingerprint(
        task=task,
        complexity=c,
        non_linearity=non_lin,
        interaction_strength=inter,
        noise_level=noise,
        effective_max_depth=depth,
    )

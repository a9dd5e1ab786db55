"""Evolving split-score machinery and the learning-rate schedule.

Split evaluation blends a second-order gradient score with an
information score normalized by running gradient statistics; the blend
only activates from iteration 5 onward and is gated by tanh(t/20).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS = 1e-10

GRAD_WEIGHT = 0.7
INFO_WEIGHT = 0.3
INFO_PHASE_START = 5
TANH_SCALE = 20.0

COMPLEXITY_PENALTY_BASE = 0.1  # gamma_0; the penalty grows linearly with t/T
BALANCE_RATIO_FLOOR = 0.1
BALANCE_DECAY_RATE = 5.0
DEPTH_SHRINK_BASE = 0.9
DEPTH_SHRINK_SCALE = 3.0
MIN_LR_FRACTION = 0.01


@dataclass(frozen=True)
class MorphTuning:
    """Internal constants of the morphing criterion.

    Defaults reproduce the published behavior; ``neutral()`` switches
    every morphing term off so the builder reduces to a plain
    second-order tree learner (used by the oracle-equivalence tests).
    """

    grad_weight: float = GRAD_WEIGHT
    info_weight: float = INFO_WEIGHT
    complexity_penalty_base: float = COMPLEXITY_PENALTY_BASE
    balance_penalty: bool = True
    depth_shrinkage: bool = True

    @classmethod
    def neutral(cls) -> "MorphTuning":
        return cls(
            grad_weight=1.0,
            info_weight=0.0,
            complexity_penalty_base=0.0,
            balance_penalty=False,
            depth_shrinkage=False,
        )


DEFAULT_TUNING = MorphTuning()


class MorphState:
    """Running EMA of per-iteration gradient mean/std plus counters.

    The first update seeds the EMA from the batch statistics so the
    normalized gradient never divides by a near-zero std transient.
    """

    def __init__(self, decay: float, total_iterations: int, evolution_pressure: float):
        self.decay = float(decay)
        self.total_iterations = int(total_iterations)
        self.evolution_pressure = float(evolution_pressure)
        self.mean = 0.0
        self.std = 0.0
        self.t = 0
        self.initialized = False

    def update(self, g: np.ndarray) -> None:
        """Fold one iteration's gradient statistics into the EMA."""
        batch_mean = float(np.mean(g))
        batch_std = float(np.std(g))
        if not self.initialized:
            self.mean = batch_mean
            self.std = batch_std
            self.initialized = True
        else:
            a = self.decay
            self.mean = (1.0 - a) * self.mean + a * batch_mean
            self.std = (1.0 - a) * self.std + a * batch_std


@dataclass(frozen=True)
class NodeScoreParts:
    gradient_part: float
    info_part: float
    blended: float


def per_sample_scores(state: MorphState, g: np.ndarray, h: np.ndarray, lambda_l2: float):
    """Per-sample gradient scores and (phase-gated) information scores.

    Before iteration 5 the information scores are all zero and the EMA
    statistics are not consulted.
    """
    grad_scores = g * g / (h + lambda_l2)
    if state.t < INFO_PHASE_START or not state.initialized:
        return grad_scores, np.zeros_like(g)
    normalized = (g - state.mean) / (state.std + EPS)
    damping = 1.0 + state.evolution_pressure * state.t / state.total_iterations
    info_scores = np.abs(normalized) * np.log1p(np.abs(g)) / damping
    return grad_scores, info_scores


def node_score(
    state: MorphState,
    sum_g: float,
    sum_h: float,
    sum_info: float,
    lambda_l2: float,
    tuning: MorphTuning = DEFAULT_TUNING,
) -> NodeScoreParts:
    """Aggregate a node's sums into the blended morph score."""
    denom = sum_h + lambda_l2
    gradient_part = (sum_g * sum_g) / denom if denom > 0 else 0.0
    if state.t < INFO_PHASE_START:
        blended = gradient_part
    else:
        gate = math.tanh(state.t / TANH_SCALE)
        blended = tuning.grad_weight * gradient_part + tuning.info_weight * sum_info * gate
    return NodeScoreParts(gradient_part, sum_info, blended)


def learning_rate(t: int, total: int, base_lr: float, adaptive: bool = True) -> float:
    """Iteration learning rate: linear warm-up then cosine annealing.

    Warm-up covers 10% of iterations; annealing decays to 1% of the base
    rate, reaching it exactly on the final iteration.
    """
    if not adaptive:
        return base_lr
    warmup = max(1, int(0.1 * total))
    if t < warmup:
        return base_lr * (t + 1) / warmup
    lr_min = MIN_LR_FRACTION * base_lr
    span = (total - 1) - warmup
    if span <= 0:
        return base_lr
    phase = (t - warmup) / span
    return lr_min + 0.5 * (base_lr - lr_min) * (1.0 + math.cos(math.pi * phase))

"""Growth of a single morphing regression tree on gradient/Hessian pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, TrainConfig
from .fingerprint import ProblemFingerprint
from .morph import (
    BALANCE_DECAY_RATE,
    BALANCE_RATIO_FLOOR,
    DEFAULT_TUNING,
    DEPTH_SHRINK_BASE,
    DEPTH_SHRINK_SCALE,
    INFO_PHASE_START,
    TANH_SCALE,
    MorphState,
    MorphTuning,
    node_score,
    per_sample_scores,
)

# Threshold sampling limits keyed to unique-value counts.
HIGH_CARDINALITY = 256
HIGH_CARDINALITY_THRESHOLDS = 32
FAST_MODE_CARDINALITY = 64
FAST_MODE_THRESHOLDS = 16


@dataclass
class SplitNode:
    feature: int
    threshold: float
    gain: float
    morph_score: float
    depth: int
    left: "SplitNode | LeafNode"
    right: "SplitNode | LeafNode"


@dataclass
class LeafNode:
    value: float
    n_samples: int
    depth: int


@dataclass
class Tree:
    """Binary tree plus the ancestor/descendant feature pairs it used."""

    root: SplitNode | LeafNode
    n_features: int
    class_index: int | None = None
    interactions: frozenset = field(default_factory=frozenset)

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, SplitNode):
                stack.append(node.right)
                stack.append(node.left)

    def max_depth(self) -> int:
        return max(node.depth for node in self.nodes())

    def n_splits(self) -> int:
        return sum(1 for node in self.nodes() if isinstance(node, SplitNode))


def _quantile_grid(k: int, u: int):
    """Interpolation indices for k interior quantiles over u sorted values."""
    qs = np.linspace(0.0, 1.0, k + 2)[1:-1]
    virtual = qs * (u - 1)
    lo = np.floor(virtual).astype(np.intp)
    hi = np.minimum(lo + 1, u - 1)
    return lo, hi, virtual - lo


def _interior_quantiles(sorted_values: np.ndarray, k: int) -> np.ndarray:
    """Linearly interpolated interior quantiles along axis 0.

    The t >= 0.5 arm keeps each result within its bracketing pair, so a
    threshold never overshoots the next sorted value.
    """
    lo, hi, t = _quantile_grid(k, sorted_values.shape[0])
    if sorted_values.ndim == 2:
        t = t[:, None]
    a = sorted_values[lo]
    b = sorted_values[hi]
    return np.where(t < 0.5, a + (b - a) * t, b - (b - a) * (1.0 - t))


def _quantile_thresholds(uniq: np.ndarray, k: int) -> np.ndarray:
    """k interior quantiles of the unique values, deduplicated."""
    return np.unique(_interior_quantiles(uniq, k))


def candidate_thresholds(values: np.ndarray, fast_mode: bool) -> np.ndarray:
    """Split-point candidates for one feature, adapted to cardinality.

    Low-cardinality features get every midpoint between consecutive
    unique values; above 64 uniques in fast mode 16 interior quantiles,
    above 256 uniques 32 interior quantiles in either mode. Quantile
    candidates are deduplicated. Returned ascending.
    """
    uniq = np.unique(np.asarray(values, dtype=np.float64))
    if uniq.size <= 1:
        return np.empty(0, dtype=np.float64)
    if uniq.size > HIGH_CARDINALITY:
        return _quantile_thresholds(uniq, HIGH_CARDINALITY_THRESHOLDS)
    if fast_mode and uniq.size > FAST_MODE_CARDINALITY:
        return _quantile_thresholds(uniq, FAST_MODE_THRESHOLDS)
    return (uniq[1:] + uniq[:-1]) / 2.0


def _complexity_penalty(state: MorphState, tuning: MorphTuning) -> float:
    # grows linearly with training progress
    total = max(1, state.total_iterations)
    return tuning.complexity_penalty_base * (1.0 + state.t / total)


def _balance_factor(n_left: int, n_right: int, n: int) -> float:
    ratio = min(n_left, n_right) / n
    if ratio >= BALANCE_RATIO_FLOOR:
        return 1.0
    return math.exp(-BALANCE_DECAY_RATE * (BALANCE_RATIO_FLOOR - ratio) / BALANCE_RATIO_FLOOR)


def evaluate_split(
    feature_values: np.ndarray,
    g: np.ndarray,
    h: np.ndarray,
    info: np.ndarray,
    threshold: float,
    state: MorphState,
    config: TrainConfig,
    tuning: MorphTuning = DEFAULT_TUNING,
) -> float:
    """Gain of splitting one sample set at ``threshold`` (<= goes left).

    Returns -inf when either child would be empty or smaller than
    ``min_samples_leaf``.
    """
    mask = feature_values <= threshold
    n = feature_values.size
    n_left = int(mask.sum())
    n_right = n - n_left
    floor = max(1, config.min_samples_leaf)
    if n_left < floor or n_right < floor:
        return -math.inf
    lam = config.lambda_l2
    parent = node_score(state, g.sum(), h.sum(), info.sum(), lam, tuning)
    left = node_score(state, g[mask].sum(), h[mask].sum(), info[mask].sum(), lam, tuning)
    gr, hr, ir = g[~mask], h[~mask], info[~mask]
    right = node_score(state, gr.sum(), hr.sum(), ir.sum(), lam, tuning)
    gain = (
        left.blended
        + right.blended
        - parent.blended
        - _complexity_penalty(state, tuning)
        - config.lambda_l1
    )
    if tuning.balance_penalty:
        gain *= _balance_factor(n_left, n_right, n)
    return float(gain)


def leaf_value(
    sum_g: float,
    sum_h: float,
    depth: int,
    lr_t: float,
    state: MorphState,
    config: TrainConfig,
    tuning: MorphTuning = DEFAULT_TUNING,
) -> float:
    """Leaf output with depth and evolution-pressure shrinkage applied."""
    denom = sum_h + config.lambda_l2
    if denom <= 0:
        return 0.0
    value = lr_t
    if tuning.depth_shrinkage:
        value *= DEPTH_SHRINK_BASE ** (depth / DEPTH_SHRINK_SCALE)
    total = max(1, state.total_iterations)
    value *= 1.0 - state.evolution_pressure * min(1.0, state.t / total)
    return value * (-sum_g) / denom


class _TreeGrower:
    """One tree build: owns the per-iteration score vectors and scratch."""

    def __init__(self, data, g, h, state, lr_t, fingerprint, config, tuning):
        self.data = data
        self.g = g
        self.h = h
        self.state = state
        self.lr_t = lr_t
        self.config = config
        self.tuning = tuning
        self.max_depth = fingerprint.effective_max_depth
        self.min_leaf = max(1, config.min_samples_leaf)
        _, self.info = per_sample_scores(state, g, h, config.lambda_l2)
        self.penalty = _complexity_penalty(state, tuning)
        self.interactions: set[tuple[int, int]] = set()
        if state.t < INFO_PHASE_START:
            self.info_gate = None
        else:
            self.info_gate = tuning.info_weight * math.tanh(state.t / TANH_SCALE)

    def _blend(self, gradient_part, info_sum):
        if self.info_gate is None:
            return gradient_part
        return self.tuning.grad_weight * gradient_part + self.info_gate * info_sum

    def _gains(self, parent_blended, sum_g_l, sum_h_l, sum_i_l, totals, n_left, n):
        """Split gains from left-side prefix sums; n_left may be an array."""
        lam = self.config.lambda_l2
        total_g, total_h, total_i = totals
        sum_g_r = total_g - sum_g_l
        sum_h_r = total_h - sum_h_l
        sum_i_r = total_i - sum_i_l
        with np.errstate(divide="ignore", invalid="ignore"):
            gp_l = np.where(sum_h_l + lam > 0, sum_g_l**2 / (sum_h_l + lam), 0.0)
            gp_r = np.where(sum_h_r + lam > 0, sum_g_r**2 / (sum_h_r + lam), 0.0)
        gains = (
            self._blend(gp_l, sum_i_l)
            + self._blend(gp_r, sum_i_r)
            - parent_blended
            - self.penalty
            - self.config.lambda_l1
        )
        if self.tuning.balance_penalty:
            ratio = np.minimum(n_left, n - n_left) / n
            low = ratio < BALANCE_RATIO_FLOOR
            if np.any(low):
                decay = np.exp(
                    -BALANCE_DECAY_RATE * (BALANCE_RATIO_FLOOR - ratio) / BALANCE_RATIO_FLOOR
                )
                gains = np.where(low, gains * decay, gains)
        return gains

    def _best_split(self, idx: np.ndarray, parent_blended: float):
        """Scan all features; ties break to the lowest feature then threshold.

        Exact features (cardinality within the sampling limits) are
        evaluated at every midpoint in one matrix pass over a shared
        per-node sort; high-cardinality features fall back to the
        quantile candidates from ``candidate_thresholds``.
        """
        n = idx.size
        if n < 2:
            return None
        d = self.data.n_features
        Xn = self.data.features[idx]
        order = np.argsort(Xn, axis=0, kind="stable")
        xs = np.take_along_axis(Xn, order, axis=0)
        cg = np.cumsum(self.g[idx][order], axis=0)
        ch = np.cumsum(self.h[idx][order], axis=0)
        ci = np.cumsum(self.info[idx][order], axis=0)
        totals = (cg[-1], ch[-1], ci[-1])
        boundaries = xs[1:] != xs[:-1]  # row i <=> split position i + 1
        u_counts = boundaries.sum(axis=0) + 1
        exact_limit = FAST_MODE_CARDINALITY if self.config.fast_mode else HIGH_CARDINALITY
        exact = (u_counts > 1) & (u_counts <= exact_limit)
        sampled = u_counts > exact_limit

        candidates: dict[int, tuple[float, float]] = {}  # feature -> (gain, threshold)

        if exact.any():
            n_left = np.arange(1, n)[:, None]
            gains = self._gains(
                parent_blended, cg[:-1], ch[:-1], ci[:-1], totals, n_left, n
            )
            valid = (
                boundaries
                & exact[None, :]
                & (n_left >= self.min_leaf)
                & ((n - n_left) >= self.min_leaf)
            )
            gains = np.where(valid, gains, -np.inf)
            rows = np.argmax(gains, axis=0)  # first max: lowest threshold wins
            col_gains = gains[rows, np.arange(d)]
            for j in np.flatnonzero(np.isfinite(col_gains)):
                r = rows[j]
                threshold = (xs[r, j] + xs[r + 1, j]) / 2.0
                candidates[int(j)] = (float(col_gains[j]), float(threshold))

        # duplicate-free high-cardinality features share one quantile grid
        batched = sampled & (u_counts == n)
        if batched.any():
            cols = np.flatnonzero(batched)
            k = HIGH_CARDINALITY_THRESHOLDS if n > HIGH_CARDINALITY else FAST_MODE_THRESHOLDS
            lo, hi, t = _quantile_grid(k, n)
            a = xs[lo][:, cols]
            b = xs[hi][:, cols]
            t_col = t[:, None]
            thresholds = np.where(t_col < 0.5, a + (b - a) * t_col, b - (b - a) * (1.0 - t_col))
            pos = lo[:, None] + 1 + (thresholds >= b)
            valid = (pos >= self.min_leaf) & (n - pos >= self.min_leaf)
            gains = self._gains(
                parent_blended,
                cg[pos - 1, cols[None, :]],
                ch[pos - 1, cols[None, :]],
                ci[pos - 1, cols[None, :]],
                (totals[0][cols], totals[1][cols], totals[2][cols]),
                pos,
                n,
            )
            gains = np.where(valid, gains, -np.inf)
            rows = np.argmax(gains, axis=0)
            col_gains = gains[rows, np.arange(cols.size)]
            for i in np.flatnonzero(np.isfinite(col_gains)):
                j = int(cols[i])
                candidates[j] = (float(col_gains[i]), float(thresholds[rows[i], i]))

        # remaining high-cardinality features have repeated values
        for j in np.flatnonzero(sampled & ~batched):
            col_sorted = xs[:, j]
            keep = np.concatenate(([True], boundaries[:, j]))
            uniq = col_sorted[keep]
            k = (
                HIGH_CARDINALITY_THRESHOLDS
                if uniq.size > HIGH_CARDINALITY
                else FAST_MODE_THRESHOLDS
            )
            thresholds = _quantile_thresholds(uniq, k)
            pos = np.searchsorted(col_sorted, thresholds, side="right")
            valid = (pos >= self.min_leaf) & (n - pos >= self.min_leaf)
            if not valid.any():
                continue
            gains = self._gains(
                parent_blended,
                cg[pos - 1, j],
                ch[pos - 1, j],
                ci[pos - 1, j],
                (totals[0][j], totals[1][j], totals[2][j]),
                pos,
                n,
            )
            gains = np.where(valid, gains, -np.inf)
            m = int(np.argmax(gains))
            if np.isfinite(gains[m]):
                candidates[int(j)] = (float(gains[m]), float(thresholds[m]))

        if not candidates:
            return None
        # Prefix-sum gains can differ from order-independent sums by an ulp,
        # which would scramble the lowest-feature tie-break when two features
        # induce the same partition. Re-evaluate near-tied leaders with
        # masked sums so exact ties resolve deterministically.
        top = max(gain for gain, _ in candidates.values())
        tolerance = 1e-9 * max(1.0, abs(top))
        best = None  # (gain, feature, threshold)
        for j in sorted(candidates):
            gain, threshold = candidates[j]
            if gain < top - tolerance:
                continue
            exact = evaluate_split(
                self.data.column(j)[idx],
                self.g[idx],
                self.h[idx],
                self.info[idx],
                threshold,
                self.state,
                self.config,
                self.tuning,
            )
            if best is None or exact > best[0]:
                best = (exact, j, threshold)
        return best

    def grow(self, idx: np.ndarray, depth: int, path_features: tuple):
        sum_g = float(self.g[idx].sum())
        sum_h = float(self.h[idx].sum())
        sum_info = float(self.info[idx].sum())
        parts = node_score(self.state, sum_g, sum_h, sum_info, self.config.lambda_l2, self.tuning)

        def make_leaf():
            value = leaf_value(
                sum_g, sum_h, depth, self.lr_t, self.state, self.config, self.tuning
            )
            return LeafNode(value=value, n_samples=idx.size, depth=depth)

        if depth >= self.max_depth or idx.size < 2 * self.min_leaf:
            return make_leaf()
        best = self._best_split(idx, parts.blended)
        if best is None or best[0] <= 0.0:
            return make_leaf()
        gain, feature, threshold = best
        for ancestor in set(path_features):
            if ancestor != feature:
                self.interactions.add((min(ancestor, feature), max(ancestor, feature)))
        mask = self.data.column(feature)[idx] <= threshold
        child_path = path_features + (feature,)
        left = self.grow(idx[mask], depth + 1, child_path)
        right = self.grow(idx[~mask], depth + 1, child_path)
        return SplitNode(
            feature=feature,
            threshold=threshold,
            gain=gain,
            morph_score=parts.blended,
            depth=depth,
            left=left,
            right=right,
        )


def build_tree(
    data: Dataset,
    g: np.ndarray,
    h: np.ndarray,
    state: MorphState,
    lr_t: float,
    fingerprint: ProblemFingerprint,
    config: TrainConfig,
    tuning: MorphTuning = DEFAULT_TUNING,
    class_index: int | None = None,
) -> Tree:
    """Grow one tree greedily on (g, h) under the morphing criterion."""
    grower = _TreeGrower(data, g, h, state, lr_t, fingerprint, config, tuning)
    root = grower.grow(np.arange(data.n_samples, dtype=np.intp), 0, ())
    return Tree(
        root=root,
        n_features=data.n_features,
        class_index=class_index,
        interactions=frozenset(grower.interactions),
    )

"""Deterministic synthetic dataset generators for the benchmark harness.

Generators are self-contained closed forms so results reproduce without
any external data toolkit:

- blobs: K isotropic Gaussian clusters centered on a circle of radius 8.
- moons: two interleaving half unit circles, the second reflected and
  offset by (1, -0.5), plus isotropic Gaussian noise.
- circles: concentric unit/factor-radius circles plus noise.
- highdim: standard-normal features, labels from the sign of a random
  linear form over the informative block plus noise.
- complex: 100-D features with a nonlinear (product/quadratic) boundary.
- imbalanced4: four Gaussian clusters with skewed class weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import SpecError

KINDS = ("blobs", "moons", "circles", "highdim", "complex", "imbalanced4")


@dataclass(frozen=True)
class SyntheticSpec:
    """Named recipe for one synthetic dataset."""

    name: str
    kind: str
    n_samples: int
    seed: int = 0
    params: tuple = field(default_factory=tuple)  # sorted (key, value) pairs

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown dataset kind {self.kind!r}")
        if self.n_samples < 1:
            raise SpecError("n_samples must be positive")

    @classmethod
    def make(cls, name, kind, n_samples, seed=0, **params):
        return cls(name, kind, n_samples, seed, tuple(sorted(params.items())))

    def param_dict(self) -> dict:
        return dict(self.params)


def _class_counts(n: int, weights) -> np.ndarray:
    """Largest-remainder apportionment of n samples to class weights."""
    weights = np.asarray(weights, dtype=np.float64)
    raw = weights * n
    counts = np.floor(raw).astype(int)
    remainder = n - counts.sum()
    order = np.argsort(-(raw - counts))
    for i in range(remainder):
        counts[order[i % len(counts)]] += 1
    return counts


def _blobs(n, rng, k=3, cluster_std=1.0):
    angles = 2.0 * np.pi * np.arange(k) / k
    centers = 8.0 * np.column_stack([np.cos(angles), np.sin(angles)])
    counts = _class_counts(n, np.full(k, 1.0 / k))
    X = np.vstack(
        [centers[c] + cluster_std * rng.standard_normal((counts[c], 2)) for c in range(k)]
    )
    y = np.repeat(np.arange(k, dtype=np.float64), counts)
    return X, y


def _moons(n, rng, noise=0.2):
    n_outer = n - n // 2
    n_inner = n // 2
    t_outer = np.linspace(0.0, np.pi, n_outer)
    t_inner = np.linspace(0.0, np.pi, max(n_inner, 1))[:n_inner]
    outer = np.column_stack([np.cos(t_outer), np.sin(t_outer)])
    inner = np.column_stack([1.0 - np.cos(t_inner), 0.5 - np.sin(t_inner)])
    X = np.vstack([outer, inner])
    if noise > 0:
        X = X + noise * rng.standard_normal(X.shape)
    y = np.concatenate([np.zeros(n_outer), np.ones(n_inner)])
    return X, y


def _circles(n, rng, noise=0.1, factor=0.5):
    if not (0.0 < factor < 1.0):
        raise SpecError("circles factor must lie in (0, 1)")
    n_outer = n - n // 2
    n_inner = n // 2
    t_outer = np.linspace(0.0, 2.0 * np.pi, n_outer, endpoint=False)
    t_inner = np.linspace(0.0, 2.0 * np.pi, max(n_inner, 1), endpoint=False)[:n_inner]
    outer = np.column_stack([np.cos(t_outer), np.sin(t_outer)])
    inner = factor * np.column_stack([np.cos(t_inner), np.sin(t_inner)])
    X = np.vstack([outer, inner])
    if noise > 0:
        X = X + noise * rng.standard_normal(X.shape)
    y = np.concatenate([np.zeros(n_outer), np.ones(n_inner)])
    return X, y


def _highdim(n, rng, d=50, n_informative=10, noise=0.1):
    if n_informative > d:
        raise SpecError(f"n_informative ({n_informative}) exceeds d ({d})")
    if n_informative < 1:
        raise SpecError("n_informative must be >= 1")
    X = rng.standard_normal((n, d))
    w = rng.standard_normal(n_informative)
    margin = X[:, :n_informative] @ w / np.sqrt(n_informative)
    y = (margin + noise * rng.standard_normal(n) > 0).astype(np.float64)
    return X, y


def _complex(n, rng, d=100, noise=0.5):
    if d < 6:
        raise SpecError("complex kind needs d >= 6")
    X = rng.standard_normal((n, d))
    signal = X[:, 0] * X[:, 1] + X[:, 2] * X[:, 3] + X[:, 4] ** 2 - X[:, 5] ** 2
    y = (signal + noise * rng.standard_normal(n) > 0).astype(np.float64)
    return X, y


def _imbalanced4(n, rng, weights=(0.6, 0.2, 0.1, 0.1), cluster_std=1.5):
    weights = tuple(float(w) for w in weights)
    if len(weights) != 4 or min(weights) <= 0 or abs(sum(weights) - 1.0) > 1e-9:
        raise SpecError("imbalanced4 weights must be 4 positive values summing to 1")
    angles = 2.0 * np.pi * np.arange(4) / 4
    centers = 6.0 * np.column_stack([np.cos(angles), np.sin(angles)])
    counts = _class_counts(n, weights)
    X = np.vstack(
        [centers[c] + cluster_std * rng.standard_normal((counts[c], 2)) for c in range(4)]
    )
    y = np.repeat(np.arange(4, dtype=np.float64), counts)
    return X, y


_GENERATORS = {
    "blobs": _blobs,
    "moons": _moons,
    "circles": _circles,
    "highdim": _highdim,
    "complex": _complex,
    "imbalanced4": _imbalanced4,
}


def generate(spec: SyntheticSpec) -> Dataset:
    """Materialize a SyntheticSpec into a Dataset; deterministic per seed."""
    params = spec.param_dict()
    k = params.get("k", 3) if spec.kind == "blobs" else 4 if spec.kind == "imbalanced4" else 2
    if spec.kind != "highdim" and spec.kind != "complex" and spec.n_samples < 4 * k:
        raise SpecError(f"{spec.kind} needs at least {4 * k} samples")
    rng = np.random.default_rng(spec.seed)
    try:
        X, y = _GENERATORS[spec.kind](spec.n_samples, rng, **params)
    except TypeError as exc:
        raise SpecError(f"bad parameters for kind {spec.kind!r}: {exc}") from exc
    return Dataset(X, y)


def default_suite(seed: int = 42) -> list[SyntheticSpec]:
    """The six-dataset desk-scale benchmark suite."""
    return [
        SyntheticSpec.make("blobs3", "blobs", 300, seed, k=3, cluster_std=1.0),
        SyntheticSpec.make("moons", "moons", 400, seed, noise=0.2),
        SyntheticSpec.make("circles", "circles", 400, seed, noise=0.1, factor=0.5),
        SyntheticSpec.make("highdim50", "highdim", 600, seed, d=50, n_informative=10, noise=0.1),
        SyntheticSpec.make("complex100", "complex", 600, seed, d=100, noise=0.5),
        SyntheticSpec.make(
            "imbalanced4", "imbalanced4", 800, seed, weights=(0.6, 0.2, 0.1, 0.1)
        ),
    ]

"""Benchmark runner: generate, split, fit, score, and emit result tables."""

from __future__ import annotations

import csv
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import booster
from .data import TrainConfig, stratified_split
from .datasets import SyntheticSpec, generate
from .errors import MorphBoostError, ValidationError

TEST_FRACTION = 0.2
CSV_COLUMNS = ("dataset", "model", "accuracy", "fit_seconds", "predict_seconds")


@dataclass
class BenchResult:
    dataset: str
    model: str
    accuracy: float | None
    fit_seconds: float | None
    predict_seconds: float | None
    error: str | None = None


def _run_one(spec: SyntheticSpec, model_name: str, config: TrainConfig, split_seed: int):
    data = generate(spec)
    train, test = stratified_split(data, TEST_FRACTION, split_seed)
    t0 = time.perf_counter()
    model = booster.fit(train, config)
    t1 = time.perf_counter()
    predictions = booster.predict(model, test.features)
    t2 = time.perf_counter()
    accuracy = float(np.mean(predictions == test.target))
    return BenchResult(spec.name, model_name, accuracy, t1 - t0, t2 - t1)


def run_suite(
    specs: list[SyntheticSpec],
    configs: list[TrainConfig],
    split_seed: int = 42,
) -> list[BenchResult]:
    """Run every (spec, config) pair; failures yield an error-marked row.

    Results come back in input order. Accuracy is computed on the
    held-out 20% stratified split only.
    """
    if not specs or not configs:
        raise ValidationError("run_suite needs non-empty spec and config lists")
    named = (
        [("morphboost", configs[0])]
        if len(configs) == 1
        else [(f"morphboost-c{i}", cfg) for i, cfg in enumerate(configs)]
    )
    results = []
    for spec in specs:
        for model_name, config in named:
            try:
                results.append(_run_one(spec, model_name, config, split_seed))
            except MorphBoostError as exc:
                results.append(
                    BenchResult(spec.name, model_name, None, None, None, error=str(exc))
                )
    return results


def write_csv(results: list[BenchResult], path, include_timings: bool = False) -> None:
    """Write the results CSV atomically.

    Timing cells are left empty unless ``include_timings`` is set, so the
    default output is byte-identical across reruns with the same seeds.
    Failed runs leave accuracy empty as the error marker.
    """
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".morphboost-bench-")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in results:
                accuracy = "" if r.accuracy is None else repr(r.accuracy)
                fit_s = "" if (not include_timings or r.fit_seconds is None) else f"{r.fit_seconds:.6f}"
                pred_s = (
                    "" if (not include_timings or r.predict_seconds is None) else f"{r.predict_seconds:.6f}"
                )
                writer.writerow([r.dataset, r.model, accuracy, fit_s, pred_s])
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def format_table(results: list[BenchResult]) -> str:
    """Aligned plain-text table with measured timings."""
    rows = [("dataset", "model", "accuracy", "fit_s", "predict_s")]
    for r in results:
        if r.error is not None:
            rows.append((r.dataset, r.model, "ERROR", r.error, ""))
        else:
            rows.append(
                (
                    r.dataset,
                    r.model,
                    f"{r.accuracy:.4f}",
                    f"{r.fit_seconds:.3f}",
                    f"{r.predict_seconds:.3f}",
                )
            )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    return "\n".join(lines)

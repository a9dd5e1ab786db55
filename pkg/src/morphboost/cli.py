"""morphboost command line: train, predict, fingerprint, bench."""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile

import numpy as np

from . import booster
from .bench import format_table, run_suite, write_csv
from .data import TrainConfig, load_csv
from .datasets import default_suite
from .errors import ConfigError, MorphBoostError
from .fingerprint import fingerprint_dataset
from .losses import mean_squared_error
from .model_io import load_model, save_model

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def thread_cap() -> int:
    """Parse MORPHBOOST_THREADS (0 = auto); invalid values are rejected."""
    raw = os.environ.get("MORPHBOOST_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"MORPHBOOST_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigError("MORPHBOOST_THREADS must be >= 0")
    return value


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--iterations", type=int, default=100)
    parser.add_argument("--learning-rate", type=float, default=0.1)
    parser.add_argument("--lambda-l2", type=float, default=1.0)
    parser.add_argument("--lambda-l1", type=float, default=0.0)
    parser.add_argument("--evolution-pressure", type=float, default=0.1)
    parser.add_argument(
        "--fast-mode", action=argparse.BooleanOptionalAction, default=True
    )
    lr_mode = parser.add_mutually_exclusive_group()
    lr_mode.add_argument("--adaptive-lr", dest="adaptive_lr", action="store_true", default=True)
    lr_mode.add_argument("--fixed-lr", dest="adaptive_lr", action="store_false")
    parser.add_argument("--max-depth", type=int, default=None)
    parser.add_argument("--min-samples-leaf", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)


def _config_from_args(args) -> TrainConfig:
    return TrainConfig(
        n_iterations=args.iterations,
        learning_rate=args.learning_rate,
        lambda_l2=args.lambda_l2,
        lambda_l1=args.lambda_l1,
        evolution_pressure=args.evolution_pressure,
        fast_mode=args.fast_mode,
        adaptive_lr=args.adaptive_lr,
        max_depth=args.max_depth,
        min_samples_leaf=args.min_samples_leaf,
        early_stopping_rounds=getattr(args, "early_stopping", None),
        seed=args.seed,
    )


def _target_column(args):
    if args.no_header:
        try:
            return int(args.target)
        except ValueError:
            raise ConfigError("--target must be a column index with --no-header") from None
    return args.target


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morphboost")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model on a CSV file")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--target", required=True)
    p_train.add_argument("--out", required=True)
    p_train.add_argument("--eval-data", default=None)
    p_train.add_argument("--early-stopping", type=int, default=None)
    p_train.add_argument("--no-header", action="store_true")
    _add_config_flags(p_train)

    p_predict = sub.add_parser("predict", help="predict with a saved model")
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--data", required=True)
    p_predict.add_argument("--out", required=True)
    p_predict.add_argument("--proba", action="store_true")
    p_predict.add_argument("--target", default=None,
                           help="target column to drop from the data and score against")
    p_predict.add_argument("--no-header", action="store_true")

    p_finger = sub.add_parser("fingerprint", help="print dataset fingerprint")
    p_finger.add_argument("--data", required=True)
    p_finger.add_argument("--target", required=True)
    p_finger.add_argument("--no-header", action="store_true")
    p_finger.add_argument(
        "--fast-mode", action=argparse.BooleanOptionalAction, default=True
    )
    p_finger.add_argument("--seed", type=int, default=0)

    p_bench = sub.add_parser("bench", help="run the synthetic benchmark suite")
    p_bench.add_argument("--out", default="bench_results.csv")
    p_bench.add_argument("--spec", action="append", default=None,
                         help="dataset name from the default suite; repeatable")
    p_bench.add_argument("--seed", type=int, default=42)
    p_bench.add_argument("--iterations", type=int, default=100)
    p_bench.add_argument("--timings", action="store_true",
                         help="fill the timing columns in the CSV (non-deterministic)")
    return parser


def cmd_train(args) -> int:
    config = _config_from_args(args)
    data = load_csv(args.data, _target_column(args), has_header=not args.no_header)
    eval_data = None
    if args.eval_data:
        eval_data = load_csv(args.eval_data, _target_column(args), has_header=not args.no_header)
    model = booster.fit(data, config, eval_set=eval_data)
    save_model(model, args.out)
    print(f"task={model.task.kind}")
    print(f"iterations={model.n_iterations_trained}")
    if model.history:
        print(f"final_train_loss={model.history[-1].train_loss!r}")
    if model.best_iteration is not None:
        print(f"best_iteration={model.best_iteration}")
    names = model.feature_names or tuple(f"x{j}" for j in range(model.n_features))
    order = np.argsort(-model.importance)[:5]
    top = " ".join(f"{names[j]}={model.importance[j]:.4f}" for j in order)
    print(f"top_importances: {top}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.target is not None:
        data = load_csv(args.data, _target_column(args), has_header=not args.no_header)
        X, y_true = data.features, data.target
    else:
        data = load_csv(args.data, 0, has_header=not args.no_header)
        # target column 0 was split off above; stitch the matrix back together
        X = np.column_stack([data.target, data.features])
        y_true = None

    predictions = booster.predict(model, X)
    proba = booster.predict_proba(model, X) if args.proba else None

    directory = os.path.dirname(os.path.abspath(args.out)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".morphboost-pred-")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            header = ["prediction"]
            if proba is not None:
                header += [f"p_{k}" for k in range(proba.shape[1])]
            writer.writerow(header)
            for i in range(len(predictions)):
                row = [repr(float(predictions[i]))]
                if proba is not None:
                    row += [repr(float(v)) for v in proba[i]]
                writer.writerow(row)
        os.replace(tmp_path, args.out)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise

    if y_true is not None:
        if model.task.is_classification:
            print(f"accuracy={float(np.mean(predictions == y_true))!r}")
        else:
            print(f"mse={mean_squared_error(predictions, y_true)!r}")
    return 0


def cmd_fingerprint(args) -> int:
    data = load_csv(args.data, _target_column(args), has_header=not args.no_header)
    fp = fingerprint_dataset(data, fast_mode=args.fast_mode, seed=args.seed)
    print(f"task={fp.task.kind}")
    if fp.task.n_classes is not None:
        print(f"n_classes={fp.task.n_classes}")
    print(f"complexity={fp.complexity!r}")
    print(f"non_linearity={fp.non_linearity!r}")
    print(f"interaction_strength={fp.interaction_strength!r}")
    print(f"noise_level={fp.noise_level!r}")
    print(f"effective_max_depth={fp.effective_max_depth}")
    return 0


def cmd_bench(args) -> int:
    suite = default_suite(args.seed)
    if args.spec:
        known = {spec.name: spec for spec in suite}
        missing = [name for name in args.spec if name not in known]
        if missing:
            raise ConfigError(f"unknown bench spec(s): {', '.join(missing)}")
        suite = [known[name] for name in args.spec]
    config = TrainConfig(n_iterations=args.iterations, seed=args.seed)
    results = run_suite(suite, [config], split_seed=args.seed)
    write_csv(results, args.out, include_timings=args.timings)
    print(format_table(results))
    return 0


_COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "fingerprint": cmd_fingerprint,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        thread_cap()
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except MorphBoostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


def main_entry() -> None:  # console_scripts hook
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

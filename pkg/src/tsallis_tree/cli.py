"""Command-line interface: ``tsallis-tree {train,predict,evaluate,sweep,compare}``.

Exit codes: 0 success, 2 usage error, 3 data or model error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .criterion import KINDS, TSALLIS_KINDS, SplitCriterion
from .dataset import BUNDLED, Dataset, bundled_paths, load_csv
from .errors import AllZeroDifferences, DataError, MissingValue, ParseError, SchemaMismatch
from .evaluation import (
    EvalConfig,
    EvaluationReport,
    accuracy,
    paired_accuracies,
    parse_q_grid,
    q_sweep,
    read_report_csv,
    run_benchmark,
    write_report_csv,
    write_summary_json,
    write_sweep_csv,
)
from .stats import wilcoxon_signed_rank
from .tree import TreeParams, build_tree, load_model, predict_distribution, save_model

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _q_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"q must be finite and > 0, got {text}")
    return value


def _q_grid(text: str) -> tuple[float, ...]:
    try:
        return parse_q_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {value}")
    return value


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="CSV file with a header row")
    p.add_argument("--schema", help="JSON schema: {\"label\": ..., \"columns\": {name: numeric|categorical}}")
    p.add_argument("--bundled", choices=BUNDLED, help="use a dataset shipped with the package instead of --data/--schema")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsallis-tree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="grow one tree and save it as a JSON model")
    _add_data_args(p)
    p.add_argument("--criterion", required=True, choices=KINDS)
    p.add_argument("--q", type=_q_value, help="entropy order, required by the tsallis criteria only")
    p.add_argument("--min-leaf", type=_positive_int, default=5, help="minimal leaf size (default 5)")
    p.add_argument("--max-depth", type=int, help="depth cap (default: unlimited)")
    p.add_argument("--out", required=True, help="model file to write")

    p = sub.add_parser("predict", help="predict classes and leaf class frequencies")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="CSV holding (at least) the model's attribute columns")
    p.add_argument("--out", help="predictions CSV (default: stdout)")

    p = sub.add_parser("evaluate", help="repeated train/test benchmark of all five criteria")
    _add_data_args(p)
    p.add_argument("--reps", type=_positive_int, default=10)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--q-grid", type=_q_grid, default="0.1:10:0.1", help="lo:hi:step, inclusive (default 0.1:10:0.1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--share-q", action=argparse.BooleanOptionalAction, default=True,
                   help="tsallis-gain-ratio reuses the q chosen for tsallis (default on)")
    p.add_argument("--min-leaf", type=_positive_int, default=5)
    p.add_argument("--test-fraction", type=_fraction, default=0.3)
    p.add_argument("--stratify", action="store_true", help="stratify the train/test split by class")
    p.add_argument("--append", action="store_true", help="append rows to an existing report")
    p.add_argument("--out", required=True, help="report CSV; a JSON summary goes next to it")
    p.add_argument("--summary", help="summary JSON path (default: OUT with .json suffix)")

    p = sub.add_parser("sweep", help="accuracy and node count of tsallis trees across a q grid")
    _add_data_args(p)
    p.add_argument("--q-grid", type=_q_grid, required=True, help="lo:hi:step, inclusive")
    p.add_argument("--reps", type=_positive_int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-leaf", type=_positive_int, default=5)
    p.add_argument("--test-fraction", type=_fraction, default=0.3)
    p.add_argument("--gain-ratio", action="store_true", help="sweep tsallis-gain-ratio instead")
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="Wilcoxon signed-rank test between two criteria of a report")
    p.add_argument("--report", required=True, nargs="+", help="one or more report CSVs")
    p.add_argument("--baseline", required=True, choices=KINDS)
    p.add_argument("--target", required=True, choices=KINDS)
    p.add_argument("--per-repetition", action="store_true",
                   help="pair every (dataset, repetition) instead of per-dataset means")
    return parser


def _validate(args: argparse.Namespace) -> None:
    if args.command in ("train", "evaluate", "sweep"):
        if args.bundled and (args.data or args.schema):
            raise UsageError("--bundled excludes --data/--schema")
        if not args.bundled and not (args.data and args.schema):
            raise UsageError("give --data and --schema, or --bundled")
    if args.command == "train":
        if args.criterion in TSALLIS_KINDS and args.q is None:
            raise UsageError(f"--criterion {args.criterion} requires --q")
        if args.criterion not in TSALLIS_KINDS and args.q is not None:
            raise UsageError(f"--criterion {args.criterion} does not take --q")
        if args.max_depth is not None and args.max_depth < 0:
            raise UsageError("--max-depth must be >= 0")
    if args.command == "evaluate" and args.folds < 2:
        raise UsageError("--folds must be >= 2")


def _load(args) -> Dataset:
    if args.bundled:
        csv_path, schema_path = bundled_paths(args.bundled)
        return load_csv(csv_path, schema_path, name=args.bundled)
    return load_csv(args.data, args.schema)


def _read_instances(path, schema) -> list[list]:
    """Attribute values of a prediction CSV, matched to the model by column name."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not records:
        raise ParseError(f"{path}: missing header row")
    header = [h.strip() for h in records[0]]
    absent = [a.name for a in schema if a.name not in header]
    if absent:
        raise SchemaMismatch(f"{path}: columns {absent} required by the model are missing")
    pos = [header.index(a.name) for a in schema]
    rows = []
    for lineno, rec in enumerate(records[1:], start=1):
        if not rec:
            continue
        if len(rec) != len(header):
            raise ParseError(f"{path}: row {lineno} has {len(rec)} cells, expected {len(header)}")
        row = []
        for attr, i in zip(schema, pos):
            cell = rec[i].strip()
            if cell == "":
                raise MissingValue(lineno, attr.name)
            if attr.is_numeric:
                try:
                    row.append(float(cell))
                except ValueError:
                    raise SchemaMismatch(f"{path}: row {lineno}, column {attr.name!r}: {cell!r} is not numeric") from None
            else:
                row.append(cell)
        rows.append(row)
    return rows


def cmd_train(args) -> int:
    data = _load(args)
    criterion = SplitCriterion(args.criterion, args.q)
    tree = build_tree(data, TreeParams(criterion, args.min_leaf, args.max_depth))
    save_model(tree, args.out)
    print(f"criterion={criterion} node_count={tree.node_count} train_accuracy={accuracy(tree, data):.6f}")
    return EXIT_OK


def cmd_predict(args) -> int:
    tree = load_model(args.model)
    rows = _read_instances(args.data, tree.schema)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["row", "predicted"] + [f"p_{c}" for c in tree.class_names])
        for i, row in enumerate(rows):
            dist = predict_distribution(tree, row)
            # same tie-break as Leaf.predicted_class
            best = max(range(len(dist)), key=dist.__getitem__)
            writer.writerow([i, tree.class_names[best]] + [repr(p) for p in dist])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_evaluate(args) -> int:
    data = _load(args)
    config = EvalConfig(
        test_fraction=args.test_fraction,
        folds=args.folds,
        repetitions=args.reps,
        q_grid=args.q_grid,
        min_leaf_size=args.min_leaf,
        seed=args.seed,
        share_q=args.share_q,
        stratify=args.stratify,
    )
    report = run_benchmark(data, config)
    write_report_csv(report, args.out, append=args.append)
    summary_path = args.summary or str(Path(args.out).with_suffix(".json"))
    write_summary_json(report, summary_path)
    for kind, m in report.means().items():
        print(f"{data.name}\t{kind}\taccuracy={m['accuracy']:.4f}\tnode_count={m['node_count']:.1f}")
    print("chosen_q=" + ",".join(f"{q:g}" for q in report.chosen_q()))
    return EXIT_OK


def cmd_sweep(args) -> int:
    data = _load(args)
    config = EvalConfig(
        test_fraction=args.test_fraction,
        repetitions=args.reps,
        q_grid=args.q_grid,
        min_leaf_size=args.min_leaf,
        seed=args.seed,
    )
    rows = q_sweep(data, config, ratio_variant=args.gain_ratio)
    write_sweep_csv(rows, args.out)
    best = max(rows, key=lambda r: r.accuracy)
    simplest = min(rows, key=lambda r: r.node_count)
    print(f"rows={len(rows)} best_accuracy_q={best.q:g} ({best.accuracy:.4f}) "
          f"min_node_count_q={simplest.q:g} ({simplest.node_count:.1f})")
    return EXIT_OK


def cmd_compare(args) -> int:
    rows = []
    for path in args.report:
        rows.extend(read_report_csv(path).rows)
    report = EvaluationReport(rows)
    try:
        pairs = paired_accuracies(report, args.baseline, args.target, per_dataset=not args.per_repetition)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    result = wilcoxon_signed_rank(pairs)
    print(f"{args.target} vs {args.baseline}: {result}")
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tsallis-tree {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (DataError, AllZeroDifferences) as exc:
        print(f"tsallis-tree {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"tsallis-tree {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

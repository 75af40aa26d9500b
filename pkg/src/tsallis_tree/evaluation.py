"""Repeated hold-out evaluation with a cross-validated choice of q.

One benchmark repetition:

1. split the data 70/30 with a seed derived from ``(seed, repetition)``;
2. pick q for the Tsallis criterion by 10-fold CV on the training part
   (the gain-ratio variant reuses that q unless ``share_q`` is off);
3. grow Shannon, Gini, gain-ratio, Tsallis and Tsallis gain-ratio trees on
   the training part and record test accuracy and node count.

Everything is sequential and seeded, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .criterion import (
    GAIN_RATIO,
    GINI,
    KINDS,
    SHANNON,
    TSALLIS,
    TSALLIS_GAIN_RATIO,
    SplitCriterion,
)
from .dataset import Dataset, FoldAssignment, k_folds, split_indices
from .errors import EmptyTestSet, ParseError, TooFewInstances
from .tree import DecisionTree, TreeParams, build_tree, predict_dataset

BENCHMARK_CRITERIA = (SHANNON, GINI, GAIN_RATIO, TSALLIS, TSALLIS_GAIN_RATIO)
REPORT_HEADER = ("dataset", "criterion", "repetition", "accuracy", "node_count", "chosen_q")

# purposes mixed into the per-repetition seed
_SPLIT, _FOLDS = 0, 1


def default_q_grid() -> tuple[float, ...]:
    return q_range(0.1, 10.0, 0.1)


def q_range(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive arithmetic grid ``lo, lo+step, ..., hi``, rounded to 10 digits."""
    if not (step > 0 and lo > 0 and hi >= lo):
        raise ValueError(f"bad q range {lo}:{hi}:{step}; need 0 < lo <= hi and step > 0")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(round(lo + i * step, 10) for i in range(n))


def parse_q_grid(text: str) -> tuple[float, ...]:
    """Parse ``lo:hi:step`` (or a single value) into a q grid."""
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"q grid {text!r} is not lo:hi:step") from None
    if len(values) == 1:
        if not values[0] > 0 or not math.isfinite(values[0]):
            raise ValueError(f"q must be > 0, got {values[0]}")
        return (values[0],)
    if len(values) != 3:
        raise ValueError(f"q grid {text!r} is not lo:hi:step")
    return q_range(*values)


def derive_seed(master_seed: int, repetition: int, purpose: int = _SPLIT) -> int:
    """Seed for one repetition and purpose, mixed with numpy's SeedSequence."""
    return int(np.random.SeedSequence([int(master_seed), int(repetition), int(purpose)]).generate_state(1)[0])


@dataclass(frozen=True)
class EvalConfig:
    test_fraction: float = 0.3
    folds: int = 10
    repetitions: int = 10
    q_grid: tuple[float, ...] = field(default_factory=default_q_grid)
    min_leaf_size: int = 5
    seed: int = 0
    share_q: bool = True
    stratify: bool = False

    def __post_init__(self):
        grid = tuple(float(q) for q in self.q_grid)
        object.__setattr__(self, "q_grid", grid)
        if not grid:
            raise ValueError("q_grid is empty")
        if any(not (q > 0 and math.isfinite(q)) for q in grid):
            raise ValueError("q_grid values must be finite and > 0")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("q_grid must be strictly increasing")
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must be in (0, 1)")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.min_leaf_size < 1:
            raise ValueError("min_leaf_size must be >= 1")


def accuracy(tree: DecisionTree, test: Dataset) -> float:
    """Fraction of ``test`` instances predicted correctly."""
    if test.n_instances == 0:
        raise EmptyTestSet("accuracy needs at least one test instance")
    return float(np.mean(predict_dataset(tree, test) == test.y))


def _criterion(kind: str, q: Optional[float]) -> SplitCriterion:
    return SplitCriterion(kind, q if kind in (TSALLIS, TSALLIS_GAIN_RATIO) else None)


@dataclass(frozen=True)
class GridSearchResult:
    best_q: float
    cv_scores: tuple[tuple[float, float], ...]  # (q, mean CV accuracy)

    def score(self, q: float) -> float:
        return dict(self.cv_scores)[q]


def grid_search_q(
    train: Dataset,
    config: EvalConfig,
    ratio_variant: bool = False,
    folds: Optional[FoldAssignment] = None,
) -> GridSearchResult:
    """Choose q by k-fold CV accuracy; ties go to the smaller q.

    Every q is scored on the same fold assignment.
    """
    if train.n_instances < config.folds:
        raise TooFewInstances(f"{train.n_instances} instances cannot fill {config.folds} folds")
    if folds is None:
        folds = k_folds(train, config.folds, derive_seed(config.seed, 0, _FOLDS))
    kind = TSALLIS_GAIN_RATIO if ratio_variant else TSALLIS
    splits = [(folds.train_indices(f), train.subset(folds.test_indices(f))) for f in range(folds.k)]
    scores = []
    best_q, best = None, -math.inf
    for q in config.q_grid:
        params = TreeParams(SplitCriterion(kind, q), config.min_leaf_size)
        accs = [accuracy(build_tree(train, params, samples=tr), held_out) for tr, held_out in splits]
        mean = float(np.mean(accs))
        scores.append((q, mean))
        if mean > best:
            best_q, best = q, mean
    return GridSearchResult(best_q, tuple(scores))


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    criterion: str
    repetition: int
    accuracy: float
    node_count: int
    chosen_q: Optional[float]


@dataclass
class EvaluationReport:
    rows: list[ReportRow]
    grid_searches: list[GridSearchResult] = field(default_factory=list)

    def by_criterion(self, criterion: str) -> list[ReportRow]:
        return sorted(
            (r for r in self.rows if r.criterion == criterion), key=lambda r: (r.dataset, r.repetition)
        )

    def accuracies(self, criterion: str) -> list[float]:
        return [r.accuracy for r in self.by_criterion(criterion)]

    def means(self) -> dict[str, dict[str, float]]:
        """Per-criterion mean accuracy and node count, in row order."""
        out: dict[str, dict[str, float]] = {}
        for kind in dict.fromkeys(r.criterion for r in self.rows):
            rows = self.by_criterion(kind)
            out[kind] = {
                "accuracy": float(np.mean([r.accuracy for r in rows])),
                "node_count": float(np.mean([r.node_count for r in rows])),
            }
        return out

    def chosen_q(self) -> list[Optional[float]]:
        return [r.chosen_q for r in self.by_criterion(TSALLIS)]

    def summary(self) -> dict:
        return {
            "datasets": sorted({r.dataset for r in self.rows}),
            "repetitions": len({(r.dataset, r.repetition) for r in self.rows}),
            "means": self.means(),
            "chosen_q": self.chosen_q(),
        }


def _repetition_split(data: Dataset, config: EvalConfig, rep: int) -> tuple[Dataset, Dataset]:
    train_idx, test_idx = split_indices(
        data, config.test_fraction, derive_seed(config.seed, rep, _SPLIT), config.stratify
    )
    return data.subset(train_idx), data.subset(test_idx)


def run_benchmark(
    data: Dataset,
    config: EvalConfig,
    criteria: Sequence[str] = BENCHMARK_CRITERIA,
) -> EvaluationReport:
    """Full repeated protocol; one report row per (criterion, repetition)."""
    for kind in criteria:
        if kind not in KINDS:
            raise ValueError(f"unknown criterion {kind!r}")
    rows, searches = [], []
    for rep in range(config.repetitions):
        train, test = _repetition_split(data, config, rep)
        folds = k_folds(train, config.folds, derive_seed(config.seed, rep, _FOLDS))
        q_t = q_r = None
        if TSALLIS in criteria or (TSALLIS_GAIN_RATIO in criteria and config.share_q):
            search = grid_search_q(train, config, ratio_variant=False, folds=folds)
            searches.append(search)
            q_t = q_r = search.best_q
        if TSALLIS_GAIN_RATIO in criteria and not config.share_q:
            q_r = grid_search_q(train, config, ratio_variant=True, folds=folds).best_q
        for kind in criteria:
            q = q_r if kind == TSALLIS_GAIN_RATIO else q_t
            tree = build_tree(train, TreeParams(_criterion(kind, q), config.min_leaf_size))
            rows.append(
                ReportRow(
                    data.name,
                    kind,
                    rep,
                    accuracy(tree, test),
                    tree.node_count,
                    q if kind in (TSALLIS, TSALLIS_GAIN_RATIO) else None,
                )
            )
    return EvaluationReport(rows, searches)


@dataclass(frozen=True)
class SweepRow:
    q: float
    accuracy: float
    node_count: float


def q_sweep(data: Dataset, config: EvalConfig, ratio_variant: bool = False) -> list[SweepRow]:
    """Mean test accuracy and node count of Tsallis trees for each grid q.

    Each repetition draws one split that every q shares.
    """
    kind = TSALLIS_GAIN_RATIO if ratio_variant else TSALLIS
    if data.n_instances < 2:
        raise TooFewInstances("q sweep needs at least 2 instances")
    splits = [_repetition_split(data, config, rep) for rep in range(config.repetitions)]
    out = []
    for q in config.q_grid:
        params = TreeParams(SplitCriterion(kind, q), config.min_leaf_size)
        accs, nodes = [], []
        for train, test in splits:
            tree = build_tree(train, params)
            accs.append(accuracy(tree, test))
            nodes.append(tree.node_count)
        out.append(SweepRow(q, float(np.mean(accs)), float(np.mean(nodes))))
    return out


# report files


def _fmt_q(q: Optional[float]) -> str:
    return "" if q is None else repr(q)


def write_report_csv(report: EvaluationReport, path, append: bool = False) -> None:
    """Write report rows; with ``append`` rows are added under an existing header."""
    path = Path(path)
    exists = append and path.exists() and path.stat().st_size > 0
    if exists:
        with open(path, newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), None)
        if tuple(header or ()) != REPORT_HEADER:
            raise ParseError(f"{path}: existing header {header} differs from {list(REPORT_HEADER)}")
    with open(path, "a" if exists else "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if not exists:
            writer.writerow(REPORT_HEADER)
        for r in report.rows:
            writer.writerow(
                [r.dataset, r.criterion, r.repetition, repr(r.accuracy), r.node_count, _fmt_q(r.chosen_q)]
            )


def read_report_csv(path) -> EvaluationReport:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read report {path}: {exc}") from None
    if not records or tuple(records[0]) != REPORT_HEADER:
        raise ParseError(f"{path}: not a report CSV (expected header {list(REPORT_HEADER)})")
    rows = []
    for lineno, rec in enumerate(records[1:], start=1):
        if not rec:
            continue
        try:
            ds, kind, rep, acc, nodes, q = rec
            rows.append(ReportRow(ds, kind, int(rep), float(acc), int(nodes), float(q) if q else None))
        except ValueError:
            raise ParseError(f"{path}: malformed report row {lineno}") from None
    return EvaluationReport(rows)


def write_summary_json(report: EvaluationReport, path) -> None:
    Path(path).write_text(json.dumps(report.summary(), indent=2) + "\n", encoding="utf-8")


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["q", "accuracy", "node_count"])
        for r in rows:
            writer.writerow([repr(r.q), repr(r.accuracy), repr(r.node_count)])


def paired_accuracies(
    report: EvaluationReport, baseline: str, target: str, per_dataset: bool = True
) -> list[tuple[float, float]]:
    """(target, baseline) accuracy pairs, by dataset mean or by repetition."""
    base = {(r.dataset, r.repetition): r.accuracy for r in report.by_criterion(baseline)}
    targ = {(r.dataset, r.repetition): r.accuracy for r in report.by_criterion(target)}
    keys = sorted(set(base) & set(targ))
    if not keys:
        raise ValueError(f"report has no paired rows for {target!r} vs {baseline!r}")
    if not per_dataset:
        return [(targ[k], base[k]) for k in keys]
    pairs = []
    for ds in sorted({k[0] for k in keys}):
        ks = [k for k in keys if k[0] == ds]
        pairs.append((float(np.mean([targ[k] for k in ks])), float(np.mean([base[k] for k in ks]))))
    return pairs

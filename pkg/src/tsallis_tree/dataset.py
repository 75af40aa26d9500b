"""Typed tabular datasets: CSV loading, train/test splits and CV folds.

A dataset is stored column-encoded in one float matrix. Numeric cells hold
their value; categorical cells hold the index of their token in the
column's vocabulary, which is kept sorted so that comparing codes compares
tokens lexicographically. Class labels are indexed in order of first
appearance.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    BadFoldCount,
    EmptyDataset,
    MissingValue,
    ParseError,
    SchemaMismatch,
    TooFewInstances,
)

NUMERIC = "numeric"
CATEGORICAL = "categorical"

BUNDLED = ("wine", "glass", "haberman", "hayes_roth", "monks2", "cmc", "vehicle", "toy")
# Datasets from the UCI repository; ``toy`` is a hand-made separable set.
UCI_BUNDLED = tuple(name for name in BUNDLED if name != "toy")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise SchemaMismatch(f"attribute {self.name!r}: unknown kind {self.kind!r}")

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC


class Dataset:
    """Immutable set of instances with typed attributes and class labels."""

    def __init__(
        self,
        schema: Sequence[Attribute],
        X: np.ndarray,
        y: np.ndarray,
        class_names: Sequence[str],
        categories: Sequence[Optional[Sequence[str]]],
        name: str = "",
    ):
        self.schema = tuple(schema)
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise SchemaMismatch(f"duplicate attribute names in {names}")
        X = np.array(X, dtype=np.float64, order="C")
        y = np.array(y, dtype=np.intp)
        if X.ndim != 2 or X.shape[1] != len(self.schema):
            raise SchemaMismatch(f"data has shape {X.shape}, schema has {len(self.schema)} attributes")
        if y.shape != (X.shape[0],):
            raise SchemaMismatch("label vector length differs from instance count")
        self.class_names = tuple(class_names)
        if len(y) and (y.min() < 0 or y.max() >= len(self.class_names)):
            raise SchemaMismatch("label index outside the class list")
        self.categories = tuple(None if c is None else tuple(c) for c in categories)
        if len(self.categories) != len(self.schema):
            raise SchemaMismatch("categories must have one entry per attribute")
        X.setflags(write=False)
        y.setflags(write=False)
        self.X = X
        self.y = y
        self.name = name
        self.is_numeric = np.array([a.is_numeric for a in self.schema], dtype=bool)
        self.is_numeric.setflags(write=False)

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence],
        labels: Sequence,
        schema: Sequence[Attribute],
        name: str = "",
        class_names: Optional[Sequence[str]] = None,
    ) -> "Dataset":
        """Encode raw rows (floats for numeric, tokens for categorical)."""
        schema = tuple(schema)
        n, d = len(rows), len(schema)
        X = np.empty((n, d), dtype=np.float64)
        categories: list[Optional[tuple[str, ...]]] = []
        for j, attr in enumerate(schema):
            column = [row[j] for row in rows]
            if attr.is_numeric:
                values = np.array(column, dtype=np.float64)
                if not np.all(np.isfinite(values)):
                    raise ParseError(f"attribute {attr.name!r} has non-finite values")
                X[:, j] = values
                categories.append(None)
            else:
                tokens = [str(v) for v in column]
                if any(t == "" for t in tokens):
                    raise ParseError(f"attribute {attr.name!r} has empty tokens")
                vocab = tuple(sorted(set(tokens)))
                index = {t: i for i, t in enumerate(vocab)}
                X[:, j] = [index[t] for t in tokens]
                categories.append(vocab)
        if class_names is None:
            class_names = list(dict.fromkeys(str(label) for label in labels))
        class_index = {c: i for i, c in enumerate(class_names)}
        try:
            y = [class_index[str(label)] for label in labels]
        except KeyError as exc:
            raise SchemaMismatch(f"unknown class label {exc.args[0]!r}") from None
        return cls(schema, X, y, class_names, categories, name=name)

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def __len__(self) -> int:
        return self.n_instances

    def __repr__(self) -> str:
        return (
            f"Dataset(name={self.name!r}, n={self.n_instances}, "
            f"attributes={self.n_attributes}, classes={self.n_classes})"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.schema == other.schema
            and self.class_names == other.class_names
            and self.categories == other.categories
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    def subset(self, indices: Iterable[int]) -> "Dataset":
        """Instances at ``indices``, sharing this dataset's vocabularies."""
        idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.intp)
        return Dataset(self.schema, self.X[idx], self.y[idx], self.class_names, self.categories, self.name)

    def row(self, i: int) -> tuple:
        """Decoded instance ``i``: floats and tokens."""
        out = []
        for j, value in enumerate(self.X[i]):
            cats = self.categories[j]
            out.append(float(value) if cats is None else cats[int(value)])
        return tuple(out)

    def rows(self) -> list[tuple]:
        return [self.row(i) for i in range(self.n_instances)]

    def label_name(self, i: int) -> str:
        return self.class_names[self.y[i]]

    def schema_document(self, label: str = "class") -> dict:
        return {"label": label, "columns": {a.name: a.kind for a in self.schema}}

    def to_csv(self, path: PathLike, schema_path: Optional[PathLike] = None, label: str = "class") -> None:
        """Write the dataset so that :func:`load_csv` reproduces it exactly."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow([a.name for a in self.schema] + [label])
            for i in range(self.n_instances):
                cells = [repr(v) if isinstance(v, float) else v for v in self.row(i)]
                writer.writerow(cells + [self.label_name(i)])
        if schema_path is not None:
            Path(schema_path).write_text(json.dumps(self.schema_document(label), indent=2) + "\n")


def read_schema(schema_path: PathLike) -> tuple[str, dict[str, str]]:
    try:
        doc = json.loads(Path(schema_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read schema {schema_path}: {exc}") from None
    if not isinstance(doc, dict) or "label" not in doc or not isinstance(doc.get("columns"), dict):
        raise SchemaMismatch(f"schema {schema_path} needs 'label' and 'columns'")
    for col, kind in doc["columns"].items():
        if kind not in (NUMERIC, CATEGORICAL):
            raise SchemaMismatch(f"column {col!r}: kind must be numeric or categorical, got {kind!r}")
    return doc["label"], dict(doc["columns"])


def load_csv(path: PathLike, schema_path: PathLike, name: Optional[str] = None) -> Dataset:
    """Load a headed, comma-separated UTF-8 file described by a JSON schema.

    The schema looks like ``{"label": "class", "columns": {"x": "numeric"}}``.
    Attribute order follows the CSV header. Empty cells raise
    :class:`MissingValue`.
    """
    label, columns = read_schema(schema_path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            records = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not records:
        raise ParseError(f"{path}: missing header row")
    header = [h.strip() for h in records[0]]
    if len(set(header)) != len(header):
        raise SchemaMismatch(f"{path}: duplicate column names in header")
    if label not in header:
        raise SchemaMismatch(f"{path}: label column {label!r} not in header")
    extra = [h for h in header if h != label and h not in columns]
    missing = [c for c in columns if c not in header]
    if extra or missing or label in columns:
        raise SchemaMismatch(f"{path}: header/schema disagree (unknown {extra}, absent {missing})")
    label_pos = header.index(label)
    attr_pos = [i for i, h in enumerate(header) if h != label]
    schema = [Attribute(header[i], columns[header[i]]) for i in attr_pos]

    rows, labels = [], []
    for lineno, record in enumerate(records[1:], start=1):
        if not record:
            continue
        if len(record) != len(header):
            raise ParseError(f"{path}: row {lineno} has {len(record)} cells, expected {len(header)}")
        cells = [c.strip() for c in record]
        for pos, cell in enumerate(cells):
            if cell == "":
                raise MissingValue(lineno, header[pos])
        row = []
        for attr, pos in zip(schema, attr_pos):
            if attr.is_numeric:
                try:
                    value = float(cells[pos])
                except ValueError:
                    raise ParseError(
                        f"{path}: row {lineno}, column {attr.name!r}: {cells[pos]!r} is not numeric"
                    ) from None
                if not math.isfinite(value):
                    raise ParseError(f"{path}: row {lineno}, column {attr.name!r}: non-finite value")
                row.append(value)
            else:
                row.append(cells[pos])
        rows.append(row)
        labels.append(cells[label_pos])
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    return Dataset.from_rows(rows, labels, schema, name=name or Path(path).stem)


def bundled_paths(name: str) -> tuple[Path, Path]:
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset {name!r}; choose from {BUNDLED}")
    root = resources.files("tsallis_tree") / "data"
    return Path(str(root / f"{name}.csv")), Path(str(root / f"{name}.schema.json"))


def load_bundled(name: str) -> Dataset:
    """One of the datasets shipped with the package, see :data:`BUNDLED`."""
    csv_path, schema_path = bundled_paths(name)
    return load_csv(csv_path, schema_path, name=name)


def class_counts(data: Dataset) -> tuple[int, ...]:
    return tuple(int(c) for c in np.bincount(data.y, minlength=data.n_classes))


def _n_test(n: int, test_fraction: float) -> int:
    # round half up; Python's round() would send 2.5 to 2
    return int(math.floor(n * test_fraction + 0.5))


def train_test_split(
    data: Dataset, test_fraction: float, seed: int, stratify: bool = False
) -> tuple[Dataset, Dataset]:
    """Random partition into (train, test), ``round(n * test_fraction)`` for test.

    Unstratified by default. Both parts keep the original instance order.
    """
    train_idx, test_idx = split_indices(data, test_fraction, seed, stratify)
    return data.subset(train_idx), data.subset(test_idx)


def split_indices(
    data: Dataset, test_fraction: float, seed: int, stratify: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n = data.n_instances
    if n < 2:
        raise TooFewInstances(f"need at least 2 instances to split, got {n}")
    rng = np.random.default_rng(seed)
    if stratify:
        chosen = []
        for c in range(data.n_classes):
            members = np.flatnonzero(data.y == c)
            perm = rng.permutation(members)
            chosen.append(perm[: _n_test(len(members), test_fraction)])
        test = np.concatenate(chosen) if chosen else np.empty(0, dtype=np.intp)
    else:
        test = rng.permutation(n)[: _n_test(n, test_fraction)]
    if len(test) == 0 or len(test) == n:
        raise TooFewInstances(f"a {test_fraction} split of {n} instances leaves an empty part")
    mask = np.zeros(n, dtype=bool)
    mask[test] = True
    return np.flatnonzero(~mask), np.flatnonzero(mask)


@dataclass(frozen=True)
class FoldAssignment:
    fold_of: np.ndarray
    k: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)

    def sizes(self) -> list[int]:
        return np.bincount(self.fold_of, minlength=self.k).tolist()


def k_folds(data: Union[Dataset, int], k: int, seed: int) -> FoldAssignment:
    """Deal a random permutation of the instances round-robin into ``k`` folds."""
    n = data if isinstance(data, int) else data.n_instances
    if not 2 <= k <= n:
        raise BadFoldCount(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    fold_of = np.empty(n, dtype=np.intp)
    fold_of[perm] = np.arange(n) % k
    fold_of.setflags(write=False)
    return FoldAssignment(fold_of, k)

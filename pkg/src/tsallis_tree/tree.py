"""Binary decision trees grown with a configurable impurity criterion.

Induction is greedy and top-down. A node becomes a leaf when it is pure,
when it holds ``min_leaf_size`` instances or fewer, when ``max_depth`` is
reached, or when no admissible split improves impurity by more than
``1e-12``. A split is admissible only if both children keep at least
``min_leaf_size`` instances. Numeric tests send ``value <= threshold``
left; categorical tests send ``value == token`` left, so an unseen token
goes right.

Ties between equally good splits go to the lower attribute index, then
the smaller threshold (or lexicographically smaller token).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ._backend import kernel as _default_kernel
from .criterion import SplitCriterion
from .dataset import CATEGORICAL, NUMERIC, Attribute, Dataset
from .errors import EmptyDataset, MalformedModel, SchemaMismatch

FORMAT_TAG = "tsallis-tree/1"


@dataclass(frozen=True)
class NumericThreshold:
    c: float

    def goes_left(self, value) -> bool:
        return float(value) <= self.c


@dataclass(frozen=True)
class CategoryEquals:
    token: str

    def goes_left(self, value) -> bool:
        return str(value) == self.token


@dataclass(frozen=True)
class SplitTest:
    attribute_index: int
    test: Union[NumericThreshold, CategoryEquals]

    def goes_left(self, row: Sequence) -> bool:
        return self.test.goes_left(row[self.attribute_index])


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, ...]
    predicted_class: int

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "Leaf":
        counts = tuple(int(c) for c in counts)
        # max() keeps the first maximum: smallest class index wins ties
        return cls(counts, max(range(len(counts)), key=counts.__getitem__))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def distribution(self) -> tuple[float, ...]:
        total = self.total
        return tuple(c / total for c in self.counts)


@dataclass(frozen=True)
class Internal:
    test: SplitTest
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class TreeParams:
    criterion: SplitCriterion
    min_leaf_size: int = 5
    max_depth: Optional[int] = None

    def __post_init__(self):
        if int(self.min_leaf_size) < 1:
            raise ValueError(f"min_leaf_size must be >= 1, got {self.min_leaf_size}")
        if self.max_depth is not None and int(self.max_depth) < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    params: TreeParams
    schema: tuple[Attribute, ...]
    class_names: tuple[str, ...]

    def predict(self, instance: Sequence) -> int:
        return predict(self, instance)

    def predict_distribution(self, instance: Sequence) -> tuple[float, ...]:
        return predict_distribution(self, instance)

    def predict_dataset(self, data: Dataset) -> np.ndarray:
        return predict_dataset(self, data)

    @property
    def node_count(self) -> int:
        return node_count(self)

    def leaves(self) -> list[Leaf]:
        return [n for n in _walk(self.root) if isinstance(n, Leaf)]

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if isinstance(node, Internal):
                stack.append((node.left, d + 1))
                stack.append((node.right, d + 1))
        return best


def _walk(root: TreeNode):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)


def _criterion_args(criterion: SplitCriterion) -> tuple[float, int]:
    return criterion.order, int(criterion.normalized)


def _as_test(data: Dataset, attr: int, value: float) -> SplitTest:
    cats = data.categories[attr]
    if cats is None:
        return SplitTest(attr, NumericThreshold(float(value)))
    return SplitTest(attr, CategoryEquals(cats[int(value)]))


def candidate_cut_points(data: Dataset, attribute_index: int) -> list[SplitTest]:
    """All binary tests on one attribute at this node.

    Numeric: midpoints between consecutive distinct values. Categorical:
    one equality test per distinct token, in lexicographic order.
    """
    column = data.X[:, attribute_index]
    distinct = np.unique(column)
    if data.categories[attribute_index] is not None:
        return [_as_test(data, attribute_index, v) for v in distinct]
    out = []
    for lo, hi in zip(distinct[:-1].tolist(), distinct[1:].tolist()):
        mid = (lo + hi) / 2.0
        if not mid < hi:
            mid = lo
        out.append(SplitTest(attribute_index, NumericThreshold(mid)))
    return out


def best_split(data: Dataset, params: TreeParams, kernel=None) -> Optional[tuple[SplitTest, float]]:
    """The admissible split with the largest gain, or None if none exceeds 1e-12."""
    if data.n_instances == 0:
        return None
    kernel = kernel or _default_kernel
    q, ratio = _criterion_args(params.criterion)
    attr, value, gain = kernel.best_split(
        data.X, data.is_numeric.view(np.uint8), data.y, data.n_classes,
        np.arange(data.n_instances, dtype=np.intp), q, ratio, int(params.min_leaf_size),
    )
    if attr < 0:
        return None
    return _as_test(data, int(attr), value), float(gain)


def build_tree(
    data: Dataset,
    params: TreeParams,
    samples: Optional[np.ndarray] = None,
    kernel=None,
) -> DecisionTree:
    """Grow a tree on ``data`` (or on the rows ``samples`` of it)."""
    if samples is None:
        samples = np.arange(data.n_instances, dtype=np.intp)
    else:
        samples = np.ascontiguousarray(samples, dtype=np.intp)
    if len(samples) == 0:
        raise EmptyDataset("cannot grow a tree on zero instances")
    kernel = kernel or _default_kernel
    q, ratio = _criterion_args(params.criterion)
    max_depth = -1 if params.max_depth is None else int(params.max_depth)
    attrs, values, lefts, rights, counts = kernel.build(
        data.X, data.is_numeric.view(np.uint8), data.y, data.n_classes,
        samples, q, ratio, int(params.min_leaf_size), max_depth,
    )
    nodes: list[Optional[TreeNode]] = [None] * len(attrs)
    # preorder numbering: children always follow their parent
    for i in range(len(attrs) - 1, -1, -1):
        if attrs[i] < 0:
            nodes[i] = Leaf.from_counts(counts[i].tolist())
        else:
            nodes[i] = Internal(
                _as_test(data, int(attrs[i]), float(values[i])), nodes[lefts[i]], nodes[rights[i]]
            )
    return DecisionTree(nodes[0], params, data.schema, data.class_names)


def _check_row(tree: DecisionTree, instance: Sequence) -> None:
    if len(instance) != len(tree.schema):
        raise SchemaMismatch(f"instance has {len(instance)} values, tree expects {len(tree.schema)}")


def _leaf_for(tree: DecisionTree, instance: Sequence) -> Leaf:
    _check_row(tree, instance)
    node = tree.root
    while isinstance(node, Internal):
        try:
            left = node.test.goes_left(instance)
        except (TypeError, ValueError):
            name = tree.schema[node.test.attribute_index].name
            raise SchemaMismatch(f"attribute {name!r}: cannot compare {instance[node.test.attribute_index]!r}") from None
        node = node.left if left else node.right
    return node


def predict(tree: DecisionTree, instance: Sequence) -> int:
    """Majority class of the leaf reached by ``instance`` (raw values)."""
    return _leaf_for(tree, instance).predicted_class


def predict_distribution(tree: DecisionTree, instance: Sequence) -> tuple[float, ...]:
    """Class frequencies of the leaf reached by ``instance``."""
    return _leaf_for(tree, instance).distribution()


def check_compatible(tree: DecisionTree, data: Dataset) -> None:
    if tuple(data.schema) != tuple(tree.schema):
        raise SchemaMismatch("dataset attributes do not match the tree's schema")


def leaf_index(tree: DecisionTree, data: Dataset) -> tuple[list[Leaf], np.ndarray]:
    """Route every instance of ``data``; returns (leaves, leaf id per instance)."""
    check_compatible(tree, data)
    leaves: list[Leaf] = []
    out = np.empty(data.n_instances, dtype=np.intp)
    stack = [(tree.root, np.arange(data.n_instances, dtype=np.intp))]
    while stack:
        node, idx = stack.pop()
        if isinstance(node, Leaf):
            out[idx] = len(leaves)
            leaves.append(node)
            continue
        j = node.test.attribute_index
        column = data.X[idx, j]
        test = node.test.test
        if isinstance(test, NumericThreshold):
            mask = column <= test.c
        else:
            cats = data.categories[j]
            try:
                code = cats.index(test.token)
            except ValueError:
                code = -1
            mask = column == code
        stack.append((node.right, idx[~mask]))
        stack.append((node.left, idx[mask]))
    return leaves, out


def predict_dataset(tree: DecisionTree, data: Dataset) -> np.ndarray:
    """Predicted class index for every instance of an encoded dataset."""
    leaves, which = leaf_index(tree, data)
    classes = np.array([leaf.predicted_class for leaf in leaves], dtype=np.intp)
    return classes[which] if len(leaves) else np.empty(0, dtype=np.intp)


def node_count(tree: Union[DecisionTree, TreeNode]) -> int:
    root = tree.root if isinstance(tree, DecisionTree) else tree
    return sum(1 for _ in _walk(root))


# model documents


def _node_to_doc(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": {"counts": list(node.counts), "class": node.predicted_class}}
    test = node.test.test
    if isinstance(test, NumericThreshold):
        kind, value = NUMERIC, test.c
    else:
        kind, value = CATEGORICAL, test.token
    return {
        "split": {
            "attr": node.test.attribute_index,
            "kind": kind,
            "value": value,
            "left": _node_to_doc(node.left),
            "right": _node_to_doc(node.right),
        }
    }


def serialize_tree(tree: DecisionTree) -> dict:
    crit = tree.params.criterion
    return {
        "format": FORMAT_TAG,
        "criterion": crit.kind,
        "q": crit.q,
        "min_leaf_size": tree.params.min_leaf_size,
        "max_depth": tree.params.max_depth,
        "schema": [{"name": a.name, "kind": a.kind} for a in tree.schema],
        "classes": list(tree.class_names),
        "root": _node_to_doc(tree.root),
    }


def _node_from_doc(doc, schema: tuple[Attribute, ...], n_classes: int) -> TreeNode:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise MalformedModel(f"bad node: {doc!r:.80}")
    if "leaf" in doc:
        leaf = doc["leaf"]
        counts = tuple(int(c) for c in leaf["counts"])
        if len(counts) != n_classes or sum(counts) < 1 or min(counts) < 0:
            raise MalformedModel(f"bad leaf counts {counts}")
        node = Leaf.from_counts(counts)
        if node.predicted_class != int(leaf["class"]):
            raise MalformedModel("leaf class is not the argmax of its counts")
        return node
    split = doc["split"]
    attr = int(split["attr"])
    if not 0 <= attr < len(schema):
        raise MalformedModel(f"split attribute {attr} out of range")
    if split["kind"] != schema[attr].kind:
        raise MalformedModel(f"split kind {split['kind']!r} does not match attribute {schema[attr].name!r}")
    if split["kind"] == NUMERIC:
        test = NumericThreshold(float(split["value"]))
    else:
        if not isinstance(split["value"], str):
            raise MalformedModel("categorical split value must be a string")
        test = CategoryEquals(split["value"])
    return Internal(
        SplitTest(attr, test),
        _node_from_doc(split["left"], schema, n_classes),
        _node_from_doc(split["right"], schema, n_classes),
    )


def deserialize_tree(document: Union[dict, str, bytes]) -> DecisionTree:
    """Inverse of :func:`serialize_tree`; also accepts the JSON text."""
    try:
        doc = json.loads(document) if isinstance(document, (str, bytes)) else document
        if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
            raise MalformedModel(f"not a {FORMAT_TAG} model document")
        schema = tuple(Attribute(a["name"], a["kind"]) for a in doc["schema"])
        classes = tuple(str(c) for c in doc["classes"])
        params = TreeParams(
            SplitCriterion(doc["criterion"], doc["q"]),
            int(doc["min_leaf_size"]),
            None if doc.get("max_depth") is None else int(doc["max_depth"]),
        )
        root = _node_from_doc(doc["root"], schema, len(classes))
    except MalformedModel:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, RecursionError) as exc:
        raise MalformedModel(f"malformed model document: {exc!r}") from None
    return DecisionTree(root, params, schema, classes)


def save_model(tree: DecisionTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_tree(tree), fh, indent=1)
        fh.write("\n")


def load_model(path) -> DecisionTree:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedModel(f"cannot read model {path}: {exc}") from None
    return deserialize_tree(text)

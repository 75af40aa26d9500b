import numpy as np
import pytest

from tsallis_tree.dataset import CATEGORICAL, NUMERIC, Attribute, Dataset

_ACCEPTANCE_LINES = []


def random_dataset(rng, n=None, n_numeric=None, n_categorical=None, n_classes=None, name="synthetic"):
    """Mixed-type dataset whose labels depend noisily on the attributes."""
    n = int(rng.integers(10, 201)) if n is None else n
    n_numeric = int(rng.integers(0, 4)) if n_numeric is None else n_numeric
    n_categorical = int(rng.integers(0, 3)) if n_categorical is None else n_categorical
    if n_numeric + n_categorical == 0:
        n_numeric = 1
    k = int(rng.integers(2, 5)) if n_classes is None else n_classes
    schema, columns = [], []
    score = np.zeros(n)
    for j in range(n_numeric):
        if rng.random() < 0.5:
            col = rng.integers(0, 8, size=n).astype(float)  # heavy ties
        else:
            col = np.round(rng.normal(size=n), 3)
        score += rng.normal() * col
        schema.append(Attribute(f"x{j}", NUMERIC))
        columns.append(col.tolist())
    for j in range(n_categorical):
        tokens = [f"t{i}" for i in range(int(rng.integers(2, 5)))]
        col = rng.choice(tokens, size=n)
        effect = {t: rng.normal() for t in tokens}
        score += np.array([effect[t] for t in col])
        schema.append(Attribute(f"c{j}", CATEGORICAL))
        columns.append(col.tolist())
    score += rng.normal(scale=0.5, size=n)
    cuts = np.quantile(score, np.linspace(0, 1, k + 1)[1:-1])
    labels = np.searchsorted(cuts, score)
    rows = [list(r) for r in zip(*columns)]
    return Dataset.from_rows(rows, [f"k{c}" for c in labels], schema, name=name)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def reference_split(data, idx, criterion, min_leaf):
    """Brute-force argmax of split_gain over every admissible candidate."""
    from tsallis_tree.criterion import split_gain

    k = data.n_classes
    parent = [0] * k
    for i in idx:
        parent[data.y[i]] += 1
    best, best_gain = None, 1e-12
    for j in range(data.n_attributes):
        values = sorted({float(data.X[i, j]) for i in idx})
        if data.is_numeric[j]:
            cuts = []
            for lo, hi in zip(values, values[1:]):
                mid = (lo + hi) / 2.0
                cuts.append(mid if mid < hi else lo)
            tests = [(c, lambda v, c=c: v <= c) for c in cuts]
        else:
            tests = [(c, lambda v, c=c: v == c) for c in values]
        for value, goes_left in tests:
            left = [0] * k
            for i in idx:
                if goes_left(float(data.X[i, j])):
                    left[data.y[i]] += 1
            right = [p - l for p, l in zip(parent, left)]
            if sum(left) < min_leaf or sum(right) < min_leaf:
                continue
            gain = split_gain(parent, left, right, criterion)
            if gain > best_gain:
                best, best_gain = (j, value), gain
    return best, best_gain


def reference_tree(data, params, idx=None, depth=0):
    """Nested tuples ("leaf", counts) / ("split", attr, value, left, right)."""
    idx = list(range(data.n_instances)) if idx is None else idx
    counts = [0] * data.n_classes
    for i in idx:
        counts[data.y[i]] += 1
    stop = (
        max(counts) == len(idx)
        or len(idx) <= params.min_leaf_size
        or (params.max_depth is not None and depth >= params.max_depth)
    )
    found = None if stop else reference_split(data, idx, params.criterion, params.min_leaf_size)[0]
    if found is None:
        return ("leaf", tuple(counts))
    j, value = found
    if data.is_numeric[j]:
        left = [i for i in idx if data.X[i, j] <= value]
    else:
        left = [i for i in idx if data.X[i, j] == value]
    right = [i for i in idx if i not in set(left)]
    return ("split", j, value, reference_tree(data, params, left, depth + 1), reference_tree(data, params, right, depth + 1))


def tree_shape(tree, data):
    """The same nested-tuple form for a built DecisionTree."""
    from tsallis_tree.tree import Leaf, NumericThreshold

    def walk(node):
        if isinstance(node, Leaf):
            return ("leaf", node.counts)
        j = node.test.attribute_index
        test = node.test.test
        if isinstance(test, NumericThreshold):
            value = test.c
        else:
            value = float(data.categories[j].index(test.token))
        return ("split", j, value, walk(node.left), walk(node.right))

    return walk(tree.root)

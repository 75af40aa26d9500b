import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsallis_tree.dataset import (
    BUNDLED,
    CATEGORICAL,
    NUMERIC,
    Attribute,
    Dataset,
    class_counts,
    k_folds,
    load_bundled,
    load_csv,
    train_test_split,
    split_indices,
)
from tsallis_tree.errors import (
    BadFoldCount,
    EmptyDataset,
    MissingValue,
    ParseError,
    SchemaMismatch,
    TooFewInstances,
)

from conftest import random_dataset


def write(tmp_path, text, columns, label="class"):
    csv_path = tmp_path / "data.csv"
    schema_path = tmp_path / "data.schema.json"
    csv_path.write_text(text)
    schema_path.write_text(json.dumps({"label": label, "columns": columns}))
    return csv_path, schema_path


def tiny(n, k=2):
    rows = [[float(i)] for i in range(n)]
    labels = [f"c{i % k}" for i in range(n)]
    return Dataset.from_rows(rows, labels, [Attribute("x", NUMERIC)])


class TestLoadCsv:
    def test_small_numeric_file(self, tmp_path):
        paths = write(tmp_path, "a,b,class\n1,2,yes\n3,4,no\n5,6,yes\n7,8,no\n", {"a": NUMERIC, "b": NUMERIC})
        data = load_csv(*paths)
        assert data.n_instances == 4
        assert data.n_classes == 2
        assert data.class_names == ("yes", "no")
        assert data.y.tolist() == [0, 1, 0, 1]

    def test_missing_value_names_row_and_column(self, tmp_path):
        paths = write(tmp_path, "a,b,class\n1,2,yes\n3,,no\n", {"a": NUMERIC, "b": NUMERIC})
        with pytest.raises(MissingValue) as info:
            load_csv(*paths)
        assert "2" in str(info.value) and "'b'" in str(info.value)

    def test_non_numeric_cell(self, tmp_path):
        paths = write(tmp_path, "a,class\n1,yes\nabc,no\n", {"a": NUMERIC})
        with pytest.raises(ParseError, match="abc"):
            load_csv(*paths)

    def test_ragged_row(self, tmp_path):
        paths = write(tmp_path, "a,class\n1,yes,extra\n", {"a": NUMERIC})
        with pytest.raises(ParseError):
            load_csv(*paths)

    def test_header_schema_disagreement(self, tmp_path):
        paths = write(tmp_path, "a,c,class\n1,2,yes\n", {"a": NUMERIC, "b": NUMERIC})
        with pytest.raises(SchemaMismatch):
            load_csv(*paths)

    def test_label_absent(self, tmp_path):
        paths = write(tmp_path, "a,b\n1,2\n", {"a": NUMERIC}, label="class")
        with pytest.raises(SchemaMismatch):
            load_csv(*paths)

    def test_no_rows(self, tmp_path):
        paths = write(tmp_path, "a,class\n", {"a": NUMERIC})
        with pytest.raises(EmptyDataset):
            load_csv(*paths)

    def test_categorical_vocabulary_sorted(self, tmp_path):
        paths = write(tmp_path, "color,class\nred,1\nblue,0\ngreen,1\n", {"color": CATEGORICAL})
        data = load_csv(*paths)
        assert data.categories[0] == ("blue", "green", "red")
        assert data.X[:, 0].tolist() == [2.0, 0.0, 1.0]
        assert data.row(0) == ("red",)

    def test_wine_shape(self):
        wine = load_bundled("wine")
        assert (wine.n_instances, wine.n_attributes, wine.n_classes) == (178, 13, 3)
        assert all(a.kind == NUMERIC for a in wine.schema)
        assert sum(class_counts(wine)) == 178

    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_load(self, name):
        data = load_bundled(name)
        assert data.n_instances > 0 and data.n_classes >= 2


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["cmc", "glass", "hayes_roth"])
    def test_bundled(self, tmp_path, name):
        data = load_bundled(name)
        data.to_csv(tmp_path / "out.csv", tmp_path / "out.schema.json")
        assert load_csv(tmp_path / "out.csv", tmp_path / "out.schema.json") == data

    def test_random(self, tmp_path, rng):
        for _ in range(10):
            data = random_dataset(rng)
            data.to_csv(tmp_path / "r.csv", tmp_path / "r.schema.json")
            assert load_csv(tmp_path / "r.csv", tmp_path / "r.schema.json") == data


class TestSplit:
    def test_ten_instances(self):
        data = tiny(10)
        train, test = train_test_split(data, 0.3, seed=4)
        assert (train.n_instances, test.n_instances) == (7, 3)
        tr, te = split_indices(data, 0.3, seed=4)
        assert not set(tr) & set(te)
        assert sorted(set(tr) | set(te)) == list(range(10))

    def test_wine_test_size(self):
        _, test = train_test_split(load_bundled("wine"), 0.3, seed=0)
        assert test.n_instances == 53

    def test_round_half_up(self):
        # 5 * 0.5 = 2.5 rounds to 3
        _, te = split_indices(tiny(5), 0.5, seed=0)
        assert len(te) == 3

    def test_deterministic(self):
        data = tiny(50)
        a = split_indices(data, 0.3, seed=11)
        b = split_indices(data, 0.3, seed=11)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_seeds_differ(self):
        data = tiny(40)
        tests = {tuple(split_indices(data, 0.3, seed=s)[1]) for s in range(10)}
        assert len(tests) > 1

    def test_too_few(self):
        with pytest.raises(TooFewInstances):
            train_test_split(tiny(1, k=1), 0.3, seed=0)

    def test_stratified_keeps_proportions(self):
        data = tiny(100, k=4)
        _, test = train_test_split(data, 0.3, seed=0, stratify=True)
        assert class_counts(test) == (8, 8, 8, 8)


class TestFolds:
    def test_singletons(self):
        assert k_folds(tiny(10), 10, seed=0).sizes() == [1] * 10

    def test_uneven(self):
        sizes = k_folds(103, 10, seed=3).sizes()
        assert sorted(sizes) == [10] * 7 + [11] * 3

    @pytest.mark.parametrize("k", [1, 0, 11])
    def test_bad_k(self, k):
        with pytest.raises(BadFoldCount):
            k_folds(tiny(10), k, seed=0)

    def test_partition(self):
        folds = k_folds(37, 5, seed=9)
        seen = np.concatenate([folds.test_indices(f) for f in range(5)])
        assert sorted(seen.tolist()) == list(range(37))
        assert len(folds.train_indices(2)) + len(folds.test_indices(2)) == 37

    def test_deterministic(self):
        assert np.array_equal(k_folds(30, 4, seed=2).fold_of, k_folds(30, 4, seed=2).fold_of)
        assert not all(np.array_equal(k_folds(30, 4, seed=0).fold_of, k_folds(30, 4, seed=s).fold_of) for s in range(1, 6))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 300), st.integers(2, 20), st.integers(0, 2**32 - 1))
    def test_sizes_balanced(self, n, k, seed):
        if k > n:
            return
        sizes = k_folds(n, k, seed).sizes()
        assert max(sizes) - min(sizes) <= 1
        assert sum(sizes) == n


class TestClassCounts:
    def test_small(self):
        data = Dataset.from_rows([[0.0], [1.0], [2.0]], ["a", "a", "b"], [Attribute("x", NUMERIC)])
        assert class_counts(data) == (2, 1)

    def test_empty_subset(self):
        assert class_counts(tiny(6, k=3).subset([])) == (0, 0, 0)

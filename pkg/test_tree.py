"""
Tests for the regression tree and lag embedding
"""

import numpy as np
import pytest

from exceptions import DimensionMismatchError, EmptyDataError, InvalidConfigError, SeriesTooShortError
from series_core import TimeSeries
from tree import (
    FeatureMatrix,
    FittedTree,
    Internal,
    Leaf,
    TreeConfig,
    best_split,
    lag_embed,
    next_features,
    predict_rows,
    resolve_use_exog,
    tree_fit,
    tree_predict,
)


# ---------------------------------------------------------------------------
# Features
# ---------------------------------------------------------------------------

def test_lag_embed_newest_first():
    data = lag_embed(np.arange(10.0), 3)
    assert data.rows.shape == (7, 3)
    np.testing.assert_array_equal(data.rows[0], [2.0, 1.0, 0.0])
    assert data.targets[0] == 3.0
    np.testing.assert_array_equal(next_features(np.arange(10.0), 3), [9.0, 8.0, 7.0])


def test_lag_embed_with_counts():
    series = TimeSeries(
        np.arange(6.0),
        exog={"clicks": [10.0, 11, 12, 13, 14, 15], "sales": [0.0, 1, 2, 3, 4, 5]},
    )
    assert resolve_use_exog(None, series)
    data = lag_embed(series, 2, use_exog=True)
    assert data.n_features == 4
    # row for target x_2 uses clicks_1, sales_1
    np.testing.assert_array_equal(data.rows[0], [1.0, 0.0, 11.0, 1.0])
    np.testing.assert_array_equal(next_features(series, 2, use_exog=True), [5.0, 4.0, 15.0, 5.0])


def test_use_exog_needs_counts():
    series = TimeSeries(np.arange(6.0))
    assert not resolve_use_exog(None, series)
    with pytest.raises(InvalidConfigError):
        resolve_use_exog(True, series)


def test_lag_embed_too_short():
    with pytest.raises(SeriesTooShortError):
        lag_embed([1.0, 2.0, 3.0], 3)


def test_feature_matrix_validation():
    with pytest.raises(EmptyDataError):
        FeatureMatrix(np.empty((0, 2)), np.empty(0))
    with pytest.raises(DimensionMismatchError):
        FeatureMatrix(np.ones((3, 2)), np.ones(2))


# ---------------------------------------------------------------------------
# Splits
# ---------------------------------------------------------------------------

def test_best_split_step_function():
    data = FeatureMatrix([[1.0], [2.0], [3.0], [4.0]], [0.0, 0.0, 10.0, 10.0])
    split = best_split(data)
    assert split.feature_index == 0
    assert split.threshold == 2.5
    assert split.sse_reduction == pytest.approx(100.0)


def test_best_split_ties_go_to_lower_feature():
    rows = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    split = best_split(FeatureMatrix(rows, [0.0, 0.0, 10.0, 10.0]))
    assert split.feature_index == 0


def test_pure_node_does_not_split():
    assert best_split(FeatureMatrix([[1.0], [2.0], [3.0]], [5.0, 5.0, 5.0])) is None


def test_min_samples_leaf_blocks_small_children():
    data = FeatureMatrix([[1.0], [2.0], [3.0], [4.0]], [0.0, 0.0, 0.0, 10.0])
    assert best_split(data, min_samples_leaf=1).threshold == 3.5
    assert best_split(data, min_samples_leaf=2).threshold == 2.5


# ---------------------------------------------------------------------------
# Fitting and prediction
# ---------------------------------------------------------------------------

def test_depth_zero_is_the_mean():
    data = FeatureMatrix([[1.0], [2.0], [3.0]], [1.0, 2.0, 6.0])
    tree = tree_fit(data, TreeConfig(max_depth=0))
    assert isinstance(tree.root, Leaf)
    assert tree_predict(tree, [100.0]) == pytest.approx(3.0)


def test_depth_is_bounded():
    rng = np.random.default_rng(5)
    data = FeatureMatrix(rng.normal(size=(200, 3)), rng.normal(size=200))
    for depth in (1, 2, 4):
        tree = tree_fit(data, TreeConfig(max_depth=depth, min_samples_leaf=1))
        assert tree.depth() <= depth


def test_threshold_rows_go_left():
    tree = FittedTree(Internal(0, 2.0, Leaf(-1.0, 1), Leaf(1.0, 1)), n_features=1)
    assert tree_predict(tree, [2.0]) == -1.0
    assert tree_predict(tree, [2.0000001]) == 1.0
    with pytest.raises(DimensionMismatchError):
        tree_predict(tree, [1.0, 2.0])


def test_tree_round_trips_through_dict():
    rng = np.random.default_rng(8)
    data = FeatureMatrix(rng.normal(size=(60, 2)), rng.normal(size=60))
    tree = tree_fit(data, TreeConfig(max_depth=3, min_samples_leaf=2))
    restored = FittedTree.from_dict(tree.to_dict())
    np.testing.assert_array_equal(predict_rows(restored, data.rows), predict_rows(tree, data.rows))


# ---------------------------------------------------------------------------
# Brute-force greedy oracle
# ---------------------------------------------------------------------------

def _oracle_fit(X, y, depth, max_depth, min_leaf):
    if depth >= max_depth or np.all(y == y[0]):
        return ("leaf", float(np.mean(y)))
    parent = float(np.sum((y - y.mean()) ** 2))
    tol = 1e-12 * max(1.0, parent)
    candidates = []
    for j in range(X.shape[1]):
        values = sorted(set(X[:, j].tolist()))
        for lo, hi in zip(values[:-1], values[1:]):
            t = (lo + hi) / 2.0
            left = X[:, j] <= t
            if left.sum() < min_leaf or (~left).sum() < min_leaf:
                continue
            sse = float(np.sum((y[left] - y[left].mean()) ** 2) + np.sum((y[~left] - y[~left].mean()) ** 2))
            candidates.append((sse, j, t))
    useful = [c for c in candidates if c[0] < parent - tol]
    if not useful:
        return ("leaf", float(np.mean(y)))
    best = min(useful, key=lambda c: c[0])  # first minimum: lower feature, then lower threshold
    _, j, t = best
    left = X[:, j] <= t
    return ("split", j, t,
            _oracle_fit(X[left], y[left], depth + 1, max_depth, min_leaf),
            _oracle_fit(X[~left], y[~left], depth + 1, max_depth, min_leaf))


def _oracle_predict(node, x):
    while node[0] == "split":
        node = node[3] if x[node[1]] <= node[2] else node[4]
    return node[1]


def test_matches_exhaustive_greedy_oracle():
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 51))
        k = int(rng.integers(1, 4))
        depth = int(rng.integers(0, 4))
        min_leaf = int(rng.integers(1, 4))
        X = rng.integers(0, 6, size=(n, k)).astype(float)
        y = rng.normal(size=n)

        tree = tree_fit(FeatureMatrix(X, y), TreeConfig(max_depth=depth, min_samples_leaf=min_leaf))
        oracle = _oracle_fit(X, y, 0, depth, min_leaf)

        queries = np.vstack([X, rng.uniform(-1, 7, size=(20, k))])
        for x in queries:
            assert tree_predict(tree, x) == pytest.approx(_oracle_predict(oracle, x), rel=1e-12, abs=1e-12)


def test_best_split_gap_example():
    split = best_split(FeatureMatrix([[1.0], [2.0], [10.0], [11.0]], [0.0, 0.0, 5.0, 5.0]))
    assert split.threshold == 6.0
    assert split.sse_reduction == pytest.approx(25.0)
    tree = tree_fit(FeatureMatrix([[1.0], [2.0], [10.0], [11.0]], [0.0, 0.0, 5.0, 5.0]))
    assert tree_predict(tree, [1.5]) == 0.0
    assert tree_predict(tree, [10.5]) == 5.0


def _random_data(seed, n=40, k=3):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, k))
    y = np.sin(X[:, 0]) * 3.0 + X[:, 1] + rng.normal(scale=0.3, size=n)
    return X, y


def _leaf_of(tree, x):
    node = tree.root
    while isinstance(node, Internal):
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node


def test_leaf_value_is_the_mean_of_its_rows():
    X, y = _random_data(31)
    tree = tree_fit(FeatureMatrix(X, y), TreeConfig(max_depth=4, min_samples_leaf=2))
    groups = {}
    for row, target in zip(X, y):
        leaf = _leaf_of(tree, row)
        groups.setdefault(id(leaf), (leaf, []))[1].append(target)
    for leaf, targets in groups.values():
        assert leaf.prediction == pytest.approx(np.mean(targets), abs=1e-12)
        assert leaf.n_samples == len(targets)


def test_training_error_falls_with_depth():
    for seed in range(5):
        X, y = _random_data(40 + seed)
        data = FeatureMatrix(X, y)
        errors = [np.mean((predict_rows(tree_fit(data, TreeConfig(max_depth=d)), X) - y) ** 2)
                  for d in range(6)]
        assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))


def test_row_order_does_not_matter():
    X, y = _random_data(77)
    order = np.random.default_rng(1).permutation(y.size)
    cfg = TreeConfig(max_depth=3)
    original = tree_fit(FeatureMatrix(X, y), cfg)
    shuffled = tree_fit(FeatureMatrix(X[order], y[order]), cfg)
    query_rows = np.random.default_rng(2).normal(size=(30, 3))
    np.testing.assert_allclose(predict_rows(original, query_rows), predict_rows(shuffled, query_rows),
                               rtol=0, atol=1e-12)

"""
CART-style regression tree over lag-embedded features.

Rows are built from the last `lag_order` values of the series (newest first)
plus, when available, the previous day's clicks and sales. Splits minimize the
summed squared error of the two children; thresholds sit at midpoints between
consecutive distinct feature values and rows equal to the threshold go left.
Ties resolve to the lower feature index, then the lower threshold.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from exceptions import (
    DimensionMismatchError,
    EmptyDataError,
    InvalidConfigError,
    SeriesTooShortError,
)
from series_core import EXOG_COLUMNS, as_values

logger = logging.getLogger(__name__)

# Two candidate SSEs closer than this (relative to the node SSE) count as a tie
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 4
    min_samples_leaf: int = 2
    lag_order: int = 5
    use_exog: Optional[bool] = None  # None: use clicks/sales whenever the series has them

    def __post_init__(self):
        if self.max_depth < 0:
            raise InvalidConfigError("max_depth must be >= 0")
        if self.min_samples_leaf < 1:
            raise InvalidConfigError("min_samples_leaf must be >= 1")
        if self.lag_order < 1:
            raise InvalidConfigError("lag_order must be >= 1")


@dataclass(frozen=True)
class FeatureMatrix:
    rows: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if rows.ndim == 1:
            rows = rows.reshape(-1, 1)
        if targets.size == 0 or rows.shape[0] == 0:
            raise EmptyDataError("feature matrix has no rows")
        if rows.shape[0] != targets.size:
            raise DimensionMismatchError(
                f"{rows.shape[0]} feature rows vs {targets.size} targets"
            )
        if rows.shape[1] < 1:
            raise DimensionMismatchError("feature rows need at least one column")
        if not (np.all(np.isfinite(rows)) and np.all(np.isfinite(targets))):
            raise EmptyDataError("feature matrix contains non-finite entries")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "targets", targets)

    @property
    def n_features(self):
        return int(self.rows.shape[1])


@dataclass(frozen=True)
class Leaf:
    prediction: float
    n_samples: int


@dataclass(frozen=True)
class Internal:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class FittedTree:
    root: TreeNode
    n_features: int

    def depth(self):
        def _depth(node):
            if isinstance(node, Leaf):
                return 0
            return 1 + max(_depth(node.left), _depth(node.right))
        return _depth(self.root)

    def to_dict(self):
        def _encode(node):
            if isinstance(node, Leaf):
                return {"prediction": node.prediction, "n_samples": node.n_samples}
            return {
                "feature_index": node.feature_index,
                "threshold": node.threshold,
                "left": _encode(node.left),
                "right": _encode(node.right),
            }
        return {"n_features": self.n_features, "root": _encode(self.root)}

    @classmethod
    def from_dict(cls, data):
        def _decode(node):
            if "prediction" in node:
                return Leaf(float(node["prediction"]), int(node["n_samples"]))
            return Internal(
                int(node["feature_index"]),
                float(node["threshold"]),
                _decode(node["left"]),
                _decode(node["right"]),
            )
        return cls(root=_decode(data["root"]), n_features=int(data["n_features"]))


class Split(NamedTuple):
    feature_index: int
    threshold: float
    sse_reduction: float


# ---------------------------------------------------------------------------
# Feature construction
# ---------------------------------------------------------------------------

def resolve_use_exog(use_exog, series):
    """Decide whether clicks/sales features apply to this series"""
    exog = getattr(series, "exog", None) or {}
    available = all(name in exog for name in EXOG_COLUMNS)
    if use_exog is None:
        return available
    if use_exog and not available:
        raise InvalidConfigError("use_exog requested but the series has no clicks/sales columns")
    return bool(use_exog)


def lag_embed(series, p, use_exog=False):
    """Rows (x_{t-1}..x_{t-p}[, clicks_{t-1}, sales_{t-1}]) -> target x_t"""
    if p < 1:
        raise InvalidConfigError("lag order must be >= 1")
    x = as_values(series)
    n = x.size
    if n <= p:
        raise SeriesTooShortError(f"lag order {p} needs more than {p} values, got {n}")

    columns = [x[p - j: n - j] for j in range(1, p + 1)]
    if use_exog:
        exog = series.exog
        for name in EXOG_COLUMNS:
            columns.append(exog[name][p - 1: n - 1])
    return FeatureMatrix(rows=np.column_stack(columns), targets=x[p:])


def next_features(series, p, use_exog=False):
    """Feature vector for forecasting the day after the last observation"""
    x = as_values(series)
    if x.size < p:
        raise SeriesTooShortError(f"need {p} recent values, got {x.size}")
    features = list(x[::-1][:p])
    if use_exog:
        features.extend(series.exog[name][-1] for name in EXOG_COLUMNS)
    return np.asarray(features, dtype=float)


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _sse(y):
    return float(np.sum((y - y.mean()) ** 2))


def _best_split(X, y, min_samples_leaf):
    m = y.size
    if m < 2 or np.all(y == y[0]):
        return None

    parent = _sse(y)
    tol = _TIE_TOL * max(1.0, parent)
    best, best_sse = None, parent - tol

    for j in range(X.shape[1]):
        col = X[:, j]
        values = np.unique(col)
        for lo, hi in zip(values[:-1], values[1:]):
            threshold = (lo + hi) / 2.0
            left = col <= threshold
            n_left = int(left.sum())
            if n_left < min_samples_leaf or m - n_left < min_samples_leaf:
                continue
            sse = _sse(y[left]) + _sse(y[~left])
            if sse < best_sse - (tol if best is not None else 0.0):
                best, best_sse = (j, float(threshold)), sse

    if best is None:
        return None
    return Split(best[0], best[1], parent - best_sse)


def best_split(data, min_samples_leaf=1):
    """Best SSE-reducing (feature, threshold), or None when nothing helps"""
    return _best_split(data.rows, data.targets, min_samples_leaf)


def tree_fit(data, cfg=TreeConfig()):
    """Greedy recursive construction, stopping on depth, purity or no useful split"""

    def _grow(X, y, depth):
        if depth >= cfg.max_depth:
            return Leaf(float(np.mean(y)), int(y.size))
        found = _best_split(X, y, cfg.min_samples_leaf)
        if found is None:
            return Leaf(float(np.mean(y)), int(y.size))
        left = X[:, found.feature_index] <= found.threshold
        return Internal(
            feature_index=found.feature_index,
            threshold=found.threshold,
            left=_grow(X[left], y[left], depth + 1),
            right=_grow(X[~left], y[~left], depth + 1),
        )

    if not isinstance(data, FeatureMatrix):
        raise EmptyDataError("tree_fit expects a FeatureMatrix")
    tree = FittedTree(root=_grow(data.rows, data.targets, 0), n_features=data.n_features)
    logger.debug("fitted tree: depth %d on %d rows", tree.depth(), data.targets.size)
    return tree


def tree_predict(tree, x):
    """Route x down the tree (x[f] <= threshold goes left) and return the leaf value"""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != tree.n_features:
        raise DimensionMismatchError(f"expected {tree.n_features} features, got {x.size}")
    node = tree.root
    while isinstance(node, Internal):
        node = node.left if x[node.feature_index] <= node.threshold else node.right
    return node.prediction


def predict_rows(tree, rows):
    return np.array([tree_predict(tree, r) for r in np.atleast_2d(rows)])

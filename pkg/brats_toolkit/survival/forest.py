"""
Random forest regressor grown with greedy variance-reduction splits.
"""

import concurrent.futures
import math
import typing

import numpy as np
import pydantic

from ..error import LengthMismatch, SurvivalError, TooFewRows
from ..models.base import BaseConfig
from ..models.survival import ForestParams


MIN_ROWS = 5
LEAF = -1


class TreeModel(BaseConfig):
    """
    Flat binary tree; rows with x[feature] <= threshold go left.
    """

    feature: typing.List[int] = pydantic.Field(
        description="Split feature, -1 at leaves"
    )
    threshold: typing.List[float] = pydantic.Field(description="Split threshold")
    left: typing.List[int] = pydantic.Field(description="Left child index")
    right: typing.List[int] = pydantic.Field(description="Right child index")
    value: typing.List[float] = pydantic.Field(description="Mean target of the node")

    def predict(self, x: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)

        node = np.zeros(len(x), dtype=np.int64)
        rows = np.arange(len(x))
        active = feature[node] != LEAF
        while active.any():
            current = node[active]
            go_left = x[rows[active], feature[current]] <= threshold[current]
            node[active] = np.where(go_left, left[current], right[current])
            active = feature[node] != LEAF

        return np.asarray(self.value)[node]


class ForestModel(BaseConfig):
    trees: typing.List[TreeModel] = pydantic.Field(description="Fitted trees")
    importances: typing.List[float] = pydantic.Field(
        description="Mean decrease in impurity per feature, sums to 1"
    )
    n_features: int = pydantic.Field(description="Number of input columns")
    params: ForestParams = pydantic.Field(description="Hyperparameters")
    seed: int = pydantic.Field(description="Seed of the per-tree streams")


def _best_split(
    x: np.ndarray,
    y: np.ndarray,
    features: np.ndarray,
    min_leaf: int,
    max_features: typing.Optional[int] = None,
) -> typing.Optional[typing.Tuple[int, float, float]]:
    """
    (feature, threshold, impurity decrease) of the best split, None if no
    valid threshold exists.

    Features are visited in the given order until ``max_features`` of them
    offered a valid threshold; features constant inside the node do not
    count. A node with non-zero error always splits, even at zero gain.
    """

    n = len(y)
    parent = float(np.sum((y - y.mean()) ** 2))
    best: typing.Optional[typing.Tuple[int, float, float]] = None
    if n < 2 * min_leaf or parent <= 0:
        return None

    visited = 0
    for f in features:
        if max_features is not None and visited >= max_features:
            break

        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        ys = y[order]

        cum = np.cumsum(ys)
        cum2 = np.cumsum(ys**2)
        total, total2 = cum[-1], cum2[-1]

        # left holds the first i rows
        i = np.arange(min_leaf, n - min_leaf + 1)
        valid = xs[i - 1] < xs[i]
        if not valid.any():
            continue

        visited += 1
        left_sum, left_sq = cum[i - 1], cum2[i - 1]
        right_sum, right_sq = total - left_sum, total2 - left_sq
        sse = (left_sq - left_sum**2 / i) + (right_sq - right_sum**2 / (n - i))
        sse = np.where(valid, sse, np.inf)

        k = int(np.argmin(sse))
        decrease = max(parent - float(sse[k]), 0.0)
        if best is None or decrease > best[2]:
            split = i[k]
            cut = float((xs[split - 1] + xs[split]) / 2)
            # adjacent floats can round the midpoint up to the right value
            if cut >= xs[split]:
                cut = float(xs[split - 1])
            best = (int(f), cut, decrease)

    return best


def grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    params: ForestParams,
    rng: np.random.Generator,
) -> typing.Tuple[TreeModel, np.ndarray]:
    """
    Fit one tree; returns it with its per-feature impurity decrease.
    """

    n_features = x.shape[1]
    per_split = params.max_features or math.ceil(n_features / 3)
    per_split = min(per_split, n_features)

    feature: typing.List[int] = []
    threshold: typing.List[float] = []
    left: typing.List[int] = []
    right: typing.List[int] = []
    value: typing.List[float] = []
    importance = np.zeros(n_features)

    def new_node(rows: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(float(y[rows].mean()))
        return len(value) - 1

    stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
    while stack:
        node, rows, depth = stack.pop()
        if params.max_depth is not None and depth >= params.max_depth:
            continue

        split = _best_split(
            x[rows],
            y[rows],
            rng.permutation(n_features),
            params.min_leaf,
            max_features=per_split,
        )
        if split is None:
            continue

        f, t, decrease = split
        importance[f] += decrease
        goes_left = x[rows, f] <= t

        feature[node] = f
        threshold[node] = t
        left_rows, right_rows = rows[goes_left], rows[~goes_left]
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        stack.append((right[node], right_rows, depth + 1))
        stack.append((left[node], left_rows, depth + 1))

    tree = TreeModel(
        feature=feature, threshold=threshold, left=left, right=right, value=value
    )

    return tree, importance


def _normalized(weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if total <= 0:
        return np.full(len(weights), 1.0 / len(weights))

    return weights / total


def rfr_fit(
    x: np.ndarray,
    y: np.ndarray,
    params: ForestParams,
    seed: int,
    threads: int = 1,
) -> ForestModel:
    """
    Trees fit on bootstrap samples, each with its own stream spawned from
    ``seed``; results do not depend on ``threads``.
    """

    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or len(x) != len(y):
        raise LengthMismatch(f"{len(x)} rows and {len(y)} targets")

    if len(y) < MIN_ROWS:
        raise TooFewRows(f"forest needs at least {MIN_ROWS} rows, got {len(y)}")

    if not np.all(np.isfinite(y)) or np.any(y < 0):
        raise SurvivalError("survival targets must be finite and non-negative")

    streams = np.random.SeedSequence(seed).spawn(params.n_trees)

    def fit_one(
        stream: np.random.SeedSequence,
    ) -> typing.Tuple[TreeModel, np.ndarray]:
        rng = np.random.default_rng(stream)
        if params.bootstrap:
            rows = rng.integers(0, len(y), size=len(y))
        else:
            rows = np.arange(len(y))

        return grow_tree(x[rows], y[rows], params, rng)

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        fitted = list(pool.map(fit_one, streams))

    per_tree = [_normalized(importance) for _, importance in fitted]
    importances = _normalized(np.mean(per_tree, axis=0))

    return ForestModel(
        trees=[tree for tree, _ in fitted],
        importances=[float(v) for v in importances],
        n_features=x.shape[1],
        params=params,
        seed=seed,
    )


def rfr_predict(model: ForestModel, x: np.ndarray) -> np.ndarray:
    rows = np.asarray(x, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != model.n_features:
        raise LengthMismatch(
            f"model expects {model.n_features} features, got {rows.shape}"
        )

    return np.mean([tree.predict(rows) for tree in model.trees], axis=0)


def permutation_importance(
    model: ForestModel,
    x: np.ndarray,
    y: np.ndarray,
    seed: int,
) -> np.ndarray:
    """
    Increase in mean squared error when a column is shuffled, clipped at 0
    and normalized to sum 1.
    """

    rng = np.random.default_rng(seed)
    baseline = float(np.mean((rfr_predict(model, x) - y) ** 2))

    increases = np.zeros(x.shape[1])
    for j in range(x.shape[1]):
        shuffled = x.copy()
        shuffled[:, j] = rng.permutation(shuffled[:, j])
        error = float(np.mean((rfr_predict(model, shuffled) - y) ** 2))
        increases[j] = max(0.0, error - baseline)

    return _normalized(increases)

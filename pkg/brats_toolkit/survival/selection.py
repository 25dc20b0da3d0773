import logging
import typing

import numpy as np

from ..error import SurvivalError, TooFewRows
from ..models.survival import ForestParams
from .forest import MIN_ROWS, permutation_importance, rfr_fit


logger = logging.getLogger(__name__)


def rank_importance(
    x: np.ndarray,
    y: np.ndarray,
    names: typing.Sequence[str],
    params: ForestParams,
    seed: int,
    method: str = "impurity",
    threads: int = 1,
) -> typing.List[typing.Tuple[str, float]]:
    """
    Features ordered by decreasing importance; ties keep column order.
    """

    if len(y) < MIN_ROWS:
        raise TooFewRows(f"ranking needs at least {MIN_ROWS} rows, got {len(y)}")

    if x.shape[1] != len(names):
        raise SurvivalError(f"{x.shape[1]} columns and {len(names)} names")

    forest = rfr_fit(x, y, params, seed, threads=threads)
    if method == "permutation":
        scores = permutation_importance(forest, x, np.asarray(y, float), seed)
    elif method == "impurity":
        scores = np.asarray(forest.importances)
    else:
        raise SurvivalError(f"unknown importance method {method!r}")

    order = np.argsort(-scores, kind="stable")

    return [(names[i], float(scores[i])) for i in order]


def select_top_k(
    ranked: typing.Sequence[typing.Tuple[str, float]], k: int
) -> typing.List[str]:
    if not 1 <= k <= len(ranked):
        raise SurvivalError(f"cannot select {k} of {len(ranked)} features")

    selected = [name for name, _ in ranked[:k]]
    logger.debug("Selected features: %s", ", ".join(selected))

    return selected

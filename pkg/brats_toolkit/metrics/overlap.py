import typing

import numpy as np

from ..error import MetricsShapeMismatch
from ..volume import Volume
from .regions import as_array


Mask = typing.Union[Volume, np.ndarray]


def _pair(pred: Mask, gt: Mask) -> typing.Tuple[np.ndarray, np.ndarray]:
    p = as_array(pred).astype(np.bool_)
    g = as_array(gt).astype(np.bool_)
    if p.shape != g.shape:
        raise MetricsShapeMismatch(f"prediction {p.shape} vs ground truth {g.shape}")

    return p, g


def dsc(pred: Mask, gt: Mask) -> float:
    """
    2|P & G| / (|P| + |G|), 1 when both masks are empty.
    """

    p, g = _pair(pred, gt)
    total = int(p.sum()) + int(g.sum())
    if total == 0:
        return 1.0

    return 2.0 * int((p & g).sum()) / total


def sensitivity(pred: Mask, gt: Mask) -> float:
    p, g = _pair(pred, gt)
    positives = int(g.sum())
    if positives == 0:
        return 1.0 if not p.any() else 0.0

    return int((p & g).sum()) / positives


def specificity(pred: Mask, gt: Mask) -> float:
    p, g = _pair(pred, gt)
    negatives = int((~g).sum())
    if negatives == 0:
        return 1.0

    return int((~p & ~g).sum()) / negatives

import dataclasses
import typing

import numpy as np
import scipy.stats

from ..error import LengthMismatch
from ..models.survival import SurvivalBins


BIN_NAMES = ("short", "mid", "long")


@dataclasses.dataclass(frozen=True)
class SurvivalScores:
    accuracy: float
    mse: float
    median_se: float
    std_se: float
    spearman: float

    def as_dict(self) -> typing.Dict[str, float]:
        return dataclasses.asdict(self)


def survival_bins(days: np.ndarray, bins: SurvivalBins) -> np.ndarray:
    """
    0 short, 1 mid, 2 long.
    """

    return np.digitize(np.asarray(days, float), [bins.short_mid, bins.mid_long])


def spearman(a: np.ndarray, b: np.ndarray) -> float:
    """
    Pearson correlation of average ranks. Constant inputs score 1 when the
    rankings agree and 0 otherwise.
    """

    ra = scipy.stats.rankdata(a)
    rb = scipy.stats.rankdata(b)
    if np.array_equal(ra, rb):
        return 1.0

    if np.std(ra) == 0 or np.std(rb) == 0:
        return 0.0

    return float(np.corrcoef(ra, rb)[0, 1])


def score(
    predicted: typing.Sequence[float],
    truth: typing.Sequence[float],
    bins: SurvivalBins,
) -> SurvivalScores:
    p = np.asarray(predicted, dtype=np.float64)
    t = np.asarray(truth, dtype=np.float64)
    if p.shape != t.shape or p.ndim != 1:
        raise LengthMismatch(f"{p.shape} predictions for {t.shape} targets")

    if len(p) < 2:
        raise LengthMismatch("scoring needs at least two subjects")

    squared = (p - t) ** 2

    return SurvivalScores(
        accuracy=float(np.mean(survival_bins(p, bins) == survival_bins(t, bins))),
        mse=float(np.mean(squared)),
        median_se=float(np.median(squared)),
        std_se=float(np.std(squared)),
        spearman=spearman(p, t),
    )

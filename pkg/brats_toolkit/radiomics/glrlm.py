import typing

import numpy as np

from ..error import EmptyRegion
from .quantize import DIRECTIONS, Offset, QuantizedRegion, mean_features, shifted


GLRLM_FEATURES = [
    "ShortRunEmphasis",
    "LongRunEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity",
    "RunLengthNonUniformityNormalized",
    "RunPercentage",
    "GrayLevelVariance",
    "RunVariance",
    "RunEntropy",
    "LowGrayLevelRunEmphasis",
    "HighGrayLevelRunEmphasis",
    "ShortRunLowGrayLevelEmphasis",
    "ShortRunHighGrayLevelEmphasis",
    "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis",
]


def size_features(matrix: np.ndarray, voxel_count: int) -> typing.Dict[str, float]:
    """
    Emphasis statistics of a [gray level, size] count matrix (sizes from 1),
    shared by run length and size zone matrices.
    """

    total = matrix.sum()
    if total == 0:
        raise EmptyRegion("matrix has no entries")

    n_levels, n_sizes = matrix.shape
    i, j = np.meshgrid(
        np.arange(1, n_levels + 1, dtype=np.float64),
        np.arange(1, n_sizes + 1, dtype=np.float64),
        indexing="ij",
    )
    p = matrix / total
    per_level = matrix.sum(axis=1)
    per_size = matrix.sum(axis=0)
    mu_i = float(np.sum(p * i))
    mu_j = float(np.sum(p * j))
    nonzero = p[p > 0]

    return {
        "SmallEmphasis": float(np.sum(p / j**2)),
        "LargeEmphasis": float(np.sum(p * j**2)),
        "GrayLevelNonUniformity": float(np.sum(per_level**2) / total),
        "GrayLevelNonUniformityNormalized": float(np.sum(per_level**2) / total**2),
        "SizeNonUniformity": float(np.sum(per_size**2) / total),
        "SizeNonUniformityNormalized": float(np.sum(per_size**2) / total**2),
        "Percentage": float(total / voxel_count),
        "GrayLevelVariance": float(np.sum(p * (i - mu_i) ** 2)),
        "SizeVariance": float(np.sum(p * (j - mu_j) ** 2)),
        "Entropy": float(-np.sum(nonzero * np.log2(nonzero))),
        "LowGrayLevelEmphasis": float(np.sum(p / i**2)),
        "HighGrayLevelEmphasis": float(np.sum(p * i**2)),
        "SmallLowGrayLevelEmphasis": float(np.sum(p / (i**2 * j**2))),
        "SmallHighGrayLevelEmphasis": float(np.sum(p * i**2 / j**2)),
        "LargeLowGrayLevelEmphasis": float(np.sum(p * j**2 / i**2)),
        "LargeHighGrayLevelEmphasis": float(np.sum(p * i**2 * j**2)),
    }


def _rename(
    values: typing.Dict[str, float], names: typing.Sequence[str]
) -> typing.Dict[str, float]:
    return dict(zip(names, values.values()))


def run_lengths(region: QuantizedRegion, direction: Offset) -> np.ndarray:
    """
    [gray level, run length] counts of maximal equal-level runs along
    ``direction``.
    """

    levels = region.levels
    longest = max(levels.shape)
    previous = shifted(levels, tuple(-d for d in direction))
    starts = (levels > 0) & (previous != levels)

    lengths = starts.astype(np.int64)
    alive = starts.copy()
    step = 1
    while alive.any() and step < longest:
        ahead = shifted(levels, tuple(step * d for d in direction))
        alive &= ahead == levels
        lengths += alive
        step += 1

    matrix = np.zeros((region.bin_count, longest), dtype=np.float64)
    np.add.at(matrix, (levels[starts] - 1, lengths[starts] - 1), 1.0)

    return matrix


def glrlm(
    region: QuantizedRegion, directions: typing.Sequence[Offset] = DIRECTIONS
) -> typing.Tuple[np.ndarray, typing.Dict[str, float]]:
    """
    Summed run length matrix and features averaged over the directions.
    """

    if region.voxel_count == 0:
        raise EmptyRegion("run lengths need at least one voxel")

    matrices = [run_lengths(region, direction) for direction in directions]
    features = mean_features(
        [
            _rename(size_features(m, region.voxel_count), GLRLM_FEATURES)
            for m in matrices
        ]
    )

    return np.sum(matrices, axis=0), features

import typing

import numpy as np

from ..error import EmptyRegion
from .quantize import DIRECTIONS, QuantizedRegion, shifted


GLDM_FEATURES = [
    "SmallDependenceEmphasis",
    "LargeDependenceEmphasis",
    "GrayLevelNonUniformity",
    "DependenceNonUniformity",
    "DependenceNonUniformityNormalized",
    "GrayLevelVariance",
    "DependenceVariance",
    "DependenceEntropy",
    "LowGrayLevelEmphasis",
    "HighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis",
    "SmallDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis",
    "LargeDependenceHighGrayLevelEmphasis",
]


def dependence(region: QuantizedRegion) -> np.ndarray:
    """
    [gray level, dependence] counts where dependence is 1 plus the number of
    26-neighbors with the same level.
    """

    levels = region.levels
    inside = levels > 0
    equal = np.zeros(levels.shape, dtype=np.int64)
    for direction in DIRECTIONS:
        for sign in (1, -1):
            neighbor = shifted(levels, tuple(sign * d for d in direction))
            equal += inside & (neighbor == levels)

    matrix = np.zeros((region.bin_count, 27), dtype=np.float64)
    np.add.at(matrix, (levels[inside] - 1, equal[inside]), 1.0)

    return matrix


def gldm(region: QuantizedRegion) -> typing.Tuple[np.ndarray, typing.Dict[str, float]]:
    if region.voxel_count == 0:
        raise EmptyRegion("dependence needs at least one voxel")

    matrix = dependence(region)
    total = matrix.sum()
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

    features = {
        "SmallDependenceEmphasis": float(np.sum(p / j**2)),
        "LargeDependenceEmphasis": float(np.sum(p * j**2)),
        "GrayLevelNonUniformity": float(np.sum(per_level**2) / total),
        "DependenceNonUniformity": float(np.sum(per_size**2) / total),
        "DependenceNonUniformityNormalized": float(np.sum(per_size**2) / total**2),
        "GrayLevelVariance": float(np.sum(p * (i - mu_i) ** 2)),
        "DependenceVariance": float(np.sum(p * (j - mu_j) ** 2)),
        "DependenceEntropy": float(-np.sum(nonzero * np.log2(nonzero))),
        "LowGrayLevelEmphasis": float(np.sum(p / i**2)),
        "HighGrayLevelEmphasis": float(np.sum(p * i**2)),
        "SmallDependenceLowGrayLevelEmphasis": float(np.sum(p / (i**2 * j**2))),
        "SmallDependenceHighGrayLevelEmphasis": float(np.sum(p * i**2 / j**2)),
        "LargeDependenceLowGrayLevelEmphasis": float(np.sum(p * j**2 / i**2)),
        "LargeDependenceHighGrayLevelEmphasis": float(np.sum(p * i**2 * j**2)),
    }

    return matrix, features

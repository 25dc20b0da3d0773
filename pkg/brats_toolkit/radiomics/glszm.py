import typing

import numpy as np

from ..error import EmptyRegion
from ..postprocess import connected_components
from .glrlm import _rename, size_features
from .quantize import QuantizedRegion


GLSZM_FEATURES = [
    "SmallAreaEmphasis",
    "LargeAreaEmphasis",
    "GrayLevelNonUniformity",
    "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity",
    "SizeZoneNonUniformityNormalized",
    "ZonePercentage",
    "GrayLevelVariance",
    "ZoneVariance",
    "ZoneEntropy",
    "LowGrayLevelZoneEmphasis",
    "HighGrayLevelZoneEmphasis",
    "SmallAreaLowGrayLevelEmphasis",
    "SmallAreaHighGrayLevelEmphasis",
    "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis",
]


def size_zones(region: QuantizedRegion) -> np.ndarray:
    """
    [gray level, zone size] counts of 26-connected equal-level zones.
    """

    voxels = region.voxel_count
    matrix = np.zeros((region.bin_count, max(voxels, 1)), dtype=np.float64)
    for level in range(1, region.bin_count + 1):
        components = connected_components(region.levels == level, connectivity=26)
        for size in components.sizes:
            matrix[level - 1, size - 1] += 1

    return matrix


def glszm(region: QuantizedRegion) -> typing.Tuple[np.ndarray, typing.Dict[str, float]]:
    if region.voxel_count == 0:
        raise EmptyRegion("size zones need at least one voxel")

    matrix = size_zones(region)

    return matrix, _rename(size_features(matrix, region.voxel_count), GLSZM_FEATURES)

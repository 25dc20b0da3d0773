import typing

import numpy as np
import scipy.ndimage

from ..error import EmptyRegion
from .quantize import QuantizedRegion


NGTDM_FEATURES = ["Coarseness", "Contrast", "Busyness", "Complexity", "Strength"]

# pyradiomics convention for a region without gray tone differences
MAX_COARSENESS = 1e6


def gray_tone_differences(
    region: QuantizedRegion,
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """
    Per gray level: (count of voxels with at least one in-mask 26-neighbor,
    sum of |level - mean neighbor level| over those voxels).
    """

    levels = region.levels.astype(np.float64)
    inside = region.levels > 0

    kernel = np.ones((3, 3, 3))
    kernel[1, 1, 1] = 0.0
    neighbor_sum = scipy.ndimage.convolve(levels, kernel, mode="constant", cval=0.0)
    neighbor_count = scipy.ndimage.convolve(
        inside.astype(np.float64), kernel, mode="constant", cval=0.0
    )

    valid = inside & (neighbor_count > 0)
    average = np.zeros_like(levels)
    average[valid] = neighbor_sum[valid] / neighbor_count[valid]

    index = region.levels[valid] - 1
    counts = np.bincount(index, minlength=region.bin_count).astype(np.float64)
    differences = np.bincount(
        index,
        weights=np.abs(levels[valid] - average[valid]),
        minlength=region.bin_count,
    )

    return counts, differences


def ngtdm(region: QuantizedRegion) -> typing.Tuple[np.ndarray, typing.Dict[str, float]]:
    if region.voxel_count == 0:
        raise EmptyRegion("gray tone differences need at least one voxel")

    counts, s = gray_tone_differences(region)
    matrix = np.stack([counts, s], axis=1)

    n_valid = counts.sum()
    if n_valid == 0:
        features = dict.fromkeys(NGTDM_FEATURES, 0.0)
        features["Coarseness"] = MAX_COARSENESS
        return matrix, features

    p = counts / n_valid
    present = p > 0
    g = np.arange(1, region.bin_count + 1, dtype=np.float64)[present]
    pi = p[present]
    si = s[present]
    n_present = int(present.sum())

    weighted = float(np.sum(pi * si))
    total_difference = float(np.sum(si))

    i, j = np.meshgrid(g, g, indexing="ij")
    pa, pb = np.meshgrid(pi, pi, indexing="ij")
    sa, sb = np.meshgrid(si, si, indexing="ij")

    coarseness = 1.0 / weighted if weighted > 0 else MAX_COARSENESS
    if n_present > 1:
        contrast = (
            np.sum(pa * pb * (i - j) ** 2)
            / (n_present * (n_present - 1))
            * total_difference
            / n_valid
        )
    else:
        contrast = 0.0

    busy_denominator = float(np.sum(np.abs(i * pa - j * pb)))
    busyness = weighted / busy_denominator if busy_denominator > 0 else 0.0
    complexity = float(
        np.sum(np.abs(i - j) * (pa * sa + pb * sb) / (pa + pb)) / n_valid
    )
    strength = (
        float(np.sum((pa + pb) * (i - j) ** 2)) / total_difference
        if total_difference > 0
        else 0.0
    )

    return matrix, {
        "Coarseness": float(coarseness),
        "Contrast": float(contrast),
        "Busyness": float(busyness),
        "Complexity": complexity,
        "Strength": strength,
    }

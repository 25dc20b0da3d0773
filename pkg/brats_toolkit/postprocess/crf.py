"""
Grid Potts mean-field smoothing of per-voxel class distributions.
"""

import numpy as np
import scipy.ndimage

from ..error import NotNormalized
from ..models.postprocess import CrfConfig


NORMALIZATION_TOLERANCE = 1e-4
LOG_FLOOR = 1e-12


def neighborhood_kernel(neighborhood: int) -> np.ndarray:
    """
    3x3x3 kernel summing the 6 or 26 neighbors of a voxel, center excluded.
    """

    connectivity = 1 if neighborhood == 6 else 3
    kernel = scipy.ndimage.generate_binary_structure(3, connectivity).astype(np.float64)
    kernel[1, 1, 1] = 0.0

    return kernel


def crf_mean_field(probs: np.ndarray, config: CrfConfig) -> np.ndarray:
    """
    probs [C, X, Y, Z] summing to 1 per voxel. Each synchronous sweep sets
    Q(c) proportional to p(c) * exp(w * sum of neighbor Q(c)).
    """

    data = np.asarray(probs, dtype=np.float64)
    if data.ndim != 4:
        raise NotNormalized(f"expected [C, X, Y, Z] probabilities, got {data.shape}")

    sums = data.sum(axis=0)
    if np.any(data < 0) or np.any(np.abs(sums - 1.0) > NORMALIZATION_TOLERANCE):
        raise NotNormalized("class probabilities do not sum to 1 per voxel")

    unary = np.log(np.maximum(data, LOG_FLOOR))
    kernel = neighborhood_kernel(config.neighborhood)

    q = data / sums
    if config.pairwise_weight == 0:
        return q

    for _ in range(config.iterations):
        messages = np.stack(
            [
                scipy.ndimage.convolve(channel, kernel, mode="constant", cval=0.0)
                for channel in q
            ]
        )
        energy = unary + config.pairwise_weight * messages
        energy -= energy.max(axis=0, keepdims=True)
        q = np.exp(energy)
        q /= q.sum(axis=0, keepdims=True)

    return q

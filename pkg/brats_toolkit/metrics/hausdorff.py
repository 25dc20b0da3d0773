import typing

import numpy as np
import scipy.ndimage
import scipy.spatial

from ..config import HAUSDORFF_SENTINEL
from .overlap import Mask, _pair


def boundary(mask: np.ndarray) -> np.ndarray:
    """
    Mask voxels with at least one six-neighbor outside the mask or the grid.
    """

    structure = scipy.ndimage.generate_binary_structure(3, 1)
    eroded = scipy.ndimage.binary_erosion(mask, structure=structure, border_value=0)

    return mask & ~eroded


def _directed(
    source: np.ndarray, target: np.ndarray, spacing: np.ndarray
) -> np.ndarray:
    tree = scipy.spatial.cKDTree(target * spacing)
    distances, _ = tree.query(source * spacing)

    return np.asarray(distances, dtype=np.float64)


def hausdorff(
    pred: Mask,
    gt: Mask,
    spacing: typing.Sequence[float] = (1.0, 1.0, 1.0),
    percentile: float = 100.0,
) -> float:
    """
    Symmetric Hausdorff distance in mm between the boundary voxel sets.

    Both masks empty gives 0, exactly one empty gives the BraTS sentinel.
    ``percentile`` below 100 gives the robust variant (HD95 at 95).
    """

    p, g = _pair(pred, gt)
    if not p.any() and not g.any():
        return 0.0

    if not p.any() or not g.any():
        return HAUSDORFF_SENTINEL

    scale = np.asarray(spacing, dtype=np.float64)
    a = np.argwhere(boundary(p)).astype(np.float64)
    b = np.argwhere(boundary(g)).astype(np.float64)

    forward = _directed(a, b, scale)
    backward = _directed(b, a, scale)
    if percentile >= 100:
        return float(max(forward.max(), backward.max()))

    return float(
        max(np.percentile(forward, percentile), np.percentile(backward, percentile))
    )

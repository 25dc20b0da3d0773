import typing

import numpy as np

from ..error import EmptyRegion
from .quantize import (
    DIRECTIONS,
    EPSILON,
    Offset,
    QuantizedRegion,
    entropy,
    mean_features,
    shifted,
)


GLCM_FEATURES = [
    "Autocorrelation",
    "JointAverage",
    "ClusterProminence",
    "ClusterShade",
    "ClusterTendency",
    "Contrast",
    "Correlation",
    "DifferenceAverage",
    "DifferenceEntropy",
    "DifferenceVariance",
    "JointEnergy",
    "JointEntropy",
    "Imc1",
    "Imc2",
    "Idm",
    "MCC",
    "Idmn",
    "Id",
    "Idn",
    "InverseVariance",
    "MaximumProbability",
    "SumAverage",
    "SumEntropy",
    "SumSquares",
]


def cooccurrence(
    region: QuantizedRegion, offset: Offset, symmetric: bool = True
) -> np.ndarray:
    """
    Counts of in-mask voxel pairs (v, v + offset) per gray level pair,
    indexed [i - 1, j - 1].
    """

    n = region.bin_count
    levels = region.levels
    neighbors = shifted(levels, offset)
    pairs = (levels > 0) & (neighbors > 0)

    flat = (levels[pairs] - 1) * n + (neighbors[pairs] - 1)
    counts = np.bincount(flat, minlength=n * n).reshape(n, n).astype(np.float64)
    if symmetric:
        counts = counts + counts.T

    return counts


def _mcc(p: np.ndarray, px: np.ndarray, py: np.ndarray) -> float:
    rows = px > 0
    cols = py > 0
    sub = p[np.ix_(rows, cols)]
    if rows.sum() < 2:
        return 1.0

    q = (sub / px[rows][:, None]) @ (sub / py[cols][None, :]).T
    eigenvalues = np.sort(np.abs(np.linalg.eigvals(q)))[::-1]

    return float(np.sqrt(max(eigenvalues[1].real, 0.0)))


def glcm_features(counts: np.ndarray) -> typing.Dict[str, float]:
    total = counts.sum()
    if total == 0:
        raise EmptyRegion("co-occurrence matrix has no pairs")

    p = counts / total
    n = p.shape[0]
    i, j = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1), indexing="ij")

    px = p.sum(axis=1)
    py = p.sum(axis=0)
    levels = np.arange(1, n + 1)
    ux = float(np.sum(px * levels))
    uy = float(np.sum(py * levels))
    sx = float(np.sqrt(np.sum(px * (levels - ux) ** 2)))
    sy = float(np.sqrt(np.sum(py * (levels - uy) ** 2)))

    p_sum = np.bincount((i + j).reshape(-1), weights=p.reshape(-1), minlength=2 * n + 1)
    p_diff = np.bincount(np.abs(i - j).reshape(-1), weights=p.reshape(-1), minlength=n)
    k_sum = np.arange(p_sum.size)
    k_diff = np.arange(p_diff.size)

    hx = entropy(px)
    hy = entropy(py)
    hxy = entropy(p)
    outer = px[:, None] * py[None, :]
    hxy1 = float(-np.sum(p * np.log2(outer + EPSILON)))
    hxy2 = entropy(outer)

    autocorrelation = float(np.sum(p * i * j))
    if sx * sy > 0:
        correlation = (autocorrelation - ux * uy) / (sx * sy)
    else:
        correlation = 1.0

    difference_average = float(np.sum(k_diff * p_diff))
    tendency = i + j - ux - uy

    return {
        "Autocorrelation": autocorrelation,
        "JointAverage": ux,
        "ClusterProminence": float(np.sum(tendency**4 * p)),
        "ClusterShade": float(np.sum(tendency**3 * p)),
        "ClusterTendency": float(np.sum(tendency**2 * p)),
        "Contrast": float(np.sum((i - j) ** 2 * p)),
        "Correlation": float(correlation),
        "DifferenceAverage": difference_average,
        "DifferenceEntropy": entropy(p_diff),
        "DifferenceVariance": float(
            np.sum((k_diff - difference_average) ** 2 * p_diff)
        ),
        "JointEnergy": float(np.sum(p**2)),
        "JointEntropy": hxy,
        "Imc1": (hxy - hxy1) / max(hx, hy) if max(hx, hy) > 0 else 0.0,
        "Imc2": float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - hxy))))),
        "Idm": float(np.sum(p / (1.0 + (i - j) ** 2))),
        "MCC": _mcc(p, px, py),
        "Idmn": float(np.sum(p / (1.0 + (i - j) ** 2 / n**2))),
        "Id": float(np.sum(p / (1.0 + np.abs(i - j)))),
        "Idn": float(np.sum(p / (1.0 + np.abs(i - j) / n))),
        "InverseVariance": float(np.sum(p_diff[1:] / k_diff[1:] ** 2)),
        "MaximumProbability": float(p.max()),
        "SumAverage": float(np.sum(k_sum * p_sum)),
        "SumEntropy": entropy(p_sum),
        "SumSquares": float(np.sum((i - ux) ** 2 * p)),
    }


def glcm(
    region: QuantizedRegion,
    offsets: typing.Sequence[Offset] = DIRECTIONS,
    symmetric: bool = True,
) -> typing.Tuple[np.ndarray, typing.Dict[str, float]]:
    """
    Summed matrix over the offsets and the features averaged per offset.
    """

    if region.voxel_count < 2:
        raise EmptyRegion("co-occurrence needs at least two voxels")

    matrices = [cooccurrence(region, offset, symmetric) for offset in offsets]
    features = mean_features([glcm_features(m) for m in matrices if m.sum() > 0])
    total = np.sum(matrices, axis=0)

    return total / total.sum(), features

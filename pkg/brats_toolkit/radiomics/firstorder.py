import typing

import numpy as np

from ..error import EmptyRegion
from .quantize import discretize, entropy


FIRST_ORDER_FEATURES = [
    "Energy",
    "TotalEnergy",
    "Entropy",
    "Minimum",
    "10Percentile",
    "90Percentile",
    "Maximum",
    "Mean",
    "Median",
    "InterquartileRange",
    "Range",
    "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation",
    "RootMeanSquared",
    "StandardDeviation",
    "Skewness",
    "Kurtosis",
    "Variance",
    "Uniformity",
]


def first_order(
    values: np.ndarray, bin_count: int = 32, voxel_volume: float = 1.0
) -> typing.Dict[str, float]:
    """
    Intensity statistics of the region voxels. Entropy and uniformity use the
    fixed bin count histogram; kurtosis is not excess kurtosis.
    """

    x = np.asarray(values, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise EmptyRegion("first order features need at least one voxel")

    bins = discretize(x, bin_count)
    p = np.bincount(bins, minlength=bin_count + 1)[1:] / x.size

    mean = x.mean()
    deviation = x - mean
    variance = float(np.mean(deviation**2))
    p10, p25, median, p75, p90 = np.percentile(x, [10, 25, 50, 75, 90])

    robust = x[(x >= p10) & (x <= p90)]
    if variance > 0:
        skewness = float(np.mean(deviation**3) / variance**1.5)
        kurtosis = float(np.mean(deviation**4) / variance**2)
    else:
        skewness = 0.0
        kurtosis = 0.0

    energy = float(np.sum(x**2))

    return {
        "Energy": energy,
        "TotalEnergy": energy * voxel_volume,
        "Entropy": entropy(p),
        "Minimum": float(x.min()),
        "10Percentile": float(p10),
        "90Percentile": float(p90),
        "Maximum": float(x.max()),
        "Mean": float(mean),
        "Median": float(median),
        "InterquartileRange": float(p75 - p25),
        "Range": float(x.max() - x.min()),
        "MeanAbsoluteDeviation": float(np.mean(np.abs(deviation))),
        "RobustMeanAbsoluteDeviation": float(
            np.mean(np.abs(robust - robust.mean()))
        ),
        "RootMeanSquared": float(np.sqrt(np.mean(x**2))),
        "StandardDeviation": float(np.sqrt(variance)),
        "Skewness": skewness,
        "Kurtosis": kurtosis,
        "Variance": variance,
        "Uniformity": float(np.sum(p**2)),
    }

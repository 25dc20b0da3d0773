"""
Gray level discretization and the array helpers shared by the texture
families.
"""

import dataclasses
import itertools
import typing

import numpy as np

from ..error import EmptyRegion, RadiomicsError


EPSILON = float(np.spacing(1))

Offset = typing.Tuple[int, int, int]

# one representative of each of the 13 opposite neighbor pairs
DIRECTIONS: typing.List[Offset] = [
    (a, b, c)
    for a, b, c in itertools.product((-1, 0, 1), repeat=3)
    if (a, b, c) > (0, 0, 0)
]


@dataclasses.dataclass(frozen=True, eq=False)
class QuantizedRegion:
    """
    Gray levels 1..bin_count inside the mask and 0 outside, cropped to the
    bounding box of the mask.
    """

    levels: np.ndarray
    spacing: typing.Tuple[float, float, float]
    bin_count: int

    @property
    def mask(self) -> np.ndarray:
        return self.levels > 0

    @property
    def voxel_count(self) -> int:
        return int(np.count_nonzero(self.levels))


def bounding_box(mask: np.ndarray) -> typing.Tuple[slice, ...]:
    coords = np.argwhere(mask)
    if coords.size == 0:
        raise EmptyRegion("region has no voxels")

    low = coords.min(axis=0)
    high = coords.max(axis=0) + 1

    return tuple(slice(int(a), int(b)) for a, b in zip(low, high))


def discretize(values: np.ndarray, bin_count: int) -> np.ndarray:
    """
    Fixed bin count: floor(N (x - min) / (max - min)) + 1, clipped to N.
    A constant sample maps to bin 1.
    """

    data = np.asarray(values, dtype=np.float64)
    if data.size == 0:
        raise EmptyRegion("no values to discretize")

    low, high = data.min(), data.max()
    if high == low:
        return np.ones(data.shape, dtype=np.int64)

    bins = np.floor(bin_count * (data - low) / (high - low)).astype(np.int64) + 1

    return np.clip(bins, 1, bin_count)


def quantize(
    image: np.ndarray,
    mask: np.ndarray,
    bin_count: int = 32,
    spacing: typing.Sequence[float] = (1.0, 1.0, 1.0),
) -> QuantizedRegion:
    if image.shape != mask.shape:
        raise RadiomicsError(f"image {image.shape} and mask {mask.shape} differ")

    inside = np.asarray(mask, dtype=np.bool_)
    box = bounding_box(inside)
    cropped = inside[box]

    levels = np.zeros(cropped.shape, dtype=np.int64)
    levels[cropped] = discretize(np.asarray(image)[box][cropped], bin_count)

    return QuantizedRegion(
        levels=levels,
        spacing=(float(spacing[0]), float(spacing[1]), float(spacing[2])),
        bin_count=bin_count,
    )


def shifted(array: np.ndarray, offset: typing.Sequence[int]) -> np.ndarray:
    """
    out[v] = array[v + offset], zero where v + offset leaves the grid.
    """

    out = np.zeros_like(array)
    source = []
    target = []
    for d, o in zip(array.shape, offset):
        if abs(o) >= d:
            return out
        source.append(slice(max(o, 0), d + min(o, 0)))
        target.append(slice(max(-o, 0), d + min(-o, 0)))

    out[tuple(target)] = array[tuple(source)]

    return out


def entropy(p: np.ndarray) -> float:
    return float(-np.sum(p * np.log2(p + EPSILON)))


def mean_features(
    per_direction: typing.Sequence[typing.Dict[str, float]]
) -> typing.Dict[str, float]:
    """
    Features averaged over the directions that produced a matrix.
    """

    if not per_direction:
        raise EmptyRegion("no direction produced a texture matrix")

    names = per_direction[0].keys()

    return {
        name: float(np.mean([values[name] for values in per_direction]))
        for name in names
    }

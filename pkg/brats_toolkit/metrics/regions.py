import dataclasses
import enum
import typing

import numpy as np

from ..config import BRATS_LABELS
from ..error import UnknownLabel
from ..volume import Volume


class Region(enum.Enum):
    ET = "et"
    TC = "tc"
    WT = "wt"


REGION_LABELS: typing.Dict[Region, typing.Tuple[int, ...]] = {
    Region.ET: (4,),
    Region.TC: (1, 4),
    Region.WT: (1, 2, 4),
}


@dataclasses.dataclass(frozen=True, eq=False)
class RegionMask:
    region: Region
    mask: np.ndarray


def as_array(value: typing.Union[Volume, np.ndarray]) -> np.ndarray:
    if isinstance(value, Volume):
        return value.data

    return np.asarray(value)


def region_masks(
    labels: typing.Union[Volume, np.ndarray]
) -> typing.List[RegionMask]:
    """
    ET = {4}, TC = {1, 4}, WT = {1, 2, 4}.
    """

    data = as_array(labels)
    unknown = set(np.unique(data).tolist()) - set(BRATS_LABELS)
    if unknown:
        raise UnknownLabel(f"labels {sorted(unknown)} outside {BRATS_LABELS}")

    return [
        RegionMask(region=region, mask=np.isin(data, values))
        for region, values in REGION_LABELS.items()
    ]

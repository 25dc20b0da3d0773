import dataclasses
import logging
import typing

import numpy as np
import scipy.ndimage

from ..models.postprocess import ComponentFilterConfig
from ..volume import Volume


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class ComponentLabels:
    """
    Component index per voxel (0 outside the mask), 1..K by decreasing size.
    """

    labels: np.ndarray
    sizes: typing.List[int]

    @property
    def count(self) -> int:
        return len(self.sizes)


def connected_components(
    mask: typing.Union[Volume, np.ndarray], connectivity: int = 26
) -> ComponentLabels:
    data = mask.data if isinstance(mask, Volume) else np.asarray(mask)
    structure = scipy.ndimage.generate_binary_structure(
        3, 1 if connectivity == 6 else 3
    )

    raw, count = scipy.ndimage.label(data.astype(np.bool_), structure=structure)
    if count == 0:
        return ComponentLabels(labels=np.zeros(data.shape, dtype=np.int32), sizes=[])

    sizes = np.bincount(raw.reshape(-1), minlength=count + 1)[1:]
    # stable so equal sizes keep scan order
    order = np.argsort(-sizes, kind="stable")

    remap = np.zeros(count + 1, dtype=np.int32)
    remap[order + 1] = np.arange(1, count + 1, dtype=np.int32)

    return ComponentLabels(
        labels=remap[raw],
        sizes=[int(sizes[i]) for i in order],
    )


def filter_small_components(
    labels: Volume, config: ComponentFilterConfig
) -> Volume:
    """
    Per foreground label, components smaller than min_voxels become 0.
    """

    data = np.array(labels.data, dtype=np.uint8)
    removed = 0
    for label, min_voxels in sorted(config.min_voxels.items()):
        components = connected_components(labels.data == label, config.connectivity)
        small = [i + 1 for i, size in enumerate(components.sizes) if size < min_voxels]
        if not small:
            continue

        drop = np.isin(components.labels, small)
        data[drop] = 0
        removed += len(small)

    if removed:
        logger.debug("Removed %d small components", removed)

    return Volume.label(data, labels.spacing)

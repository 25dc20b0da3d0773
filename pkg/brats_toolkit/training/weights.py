import typing

import numpy as np

from ..config import NUM_CLASSES
from ..error import AbsentClass
from ..patches import label_classes
from ..volume import Volume


def class_frequencies(
    labels: typing.Iterable[typing.Union[Volume, np.ndarray]]
) -> np.ndarray:
    """
    Fraction of voxels per class over all BraTS label volumes.
    """

    counts = np.zeros(NUM_CLASSES, dtype=np.int64)
    for volume in labels:
        data = volume.data if isinstance(volume, Volume) else np.asarray(volume)
        classes = label_classes(data).reshape(-1)
        counts += np.bincount(classes, minlength=256)[:NUM_CLASSES]

    total = counts.sum()
    if total == 0:
        return np.zeros(NUM_CLASSES)

    return counts / total


def weights_from_frequencies(freqs: typing.Sequence[float]) -> np.ndarray:
    frequencies = np.asarray(freqs, dtype=np.float64)
    absent = np.flatnonzero(frequencies <= 0)
    if absent.size:
        raise AbsentClass(f"classes {absent.tolist()} never occur in the training set")

    return np.median(frequencies) / frequencies


def class_weights(
    labels: typing.Iterable[typing.Union[Volume, np.ndarray]]
) -> np.ndarray:
    """
    Median frequency balancing: w[c] = median(freq) / freq[c].
    """

    return weights_from_frequencies(class_frequencies(labels))

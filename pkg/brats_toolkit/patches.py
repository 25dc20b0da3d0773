"""
Training patch sampling and overlapping inference patch stitching.

Inputs are channel-first arrays [C, X, Y, Z]; corners are voxel coordinates
of the patch origin in the (possibly zero padded) volume.
"""

import dataclasses
import itertools
import typing

import numpy as np

from .autodiff import Tensor
from .config import CHANNEL_ORDER, LABEL_TO_CLASS
from .error import CoverageGap, NoForeground, ShapeMismatch
from .models.patches import PatchSpec
from .volume import Modality, Subject, normalize


Corner = typing.Tuple[int, int, int]

# BraTS label -> class index, 255 marks values outside the alphabet
_LABEL_LOOKUP = np.full(256, 255, dtype=np.uint8)
for _label, _index in LABEL_TO_CLASS.items():
    _LABEL_LOOKUP[_label] = _index


def label_classes(labels: np.ndarray) -> np.ndarray:
    return _LABEL_LOOKUP[np.asarray(labels, dtype=np.uint8)]


@dataclasses.dataclass
class PatchBatch:
    inputs: Tensor
    targets: np.ndarray
    provenance: typing.List[typing.Tuple[str, Corner]]
    center_classes: np.ndarray = dataclasses.field(
        default_factory=lambda: np.zeros(0, dtype=np.int64)
    )

    def __len__(self) -> int:
        return len(self.provenance)

    @classmethod
    def concat(cls, batches: typing.Sequence["PatchBatch"]) -> "PatchBatch":
        return cls(
            inputs=Tensor(np.concatenate([b.inputs.data for b in batches])),
            targets=np.concatenate([b.targets for b in batches]),
            provenance=[p for b in batches for p in b.provenance],
            center_classes=np.concatenate([b.center_classes for b in batches]),
        )


def stack_modalities(subject: Subject) -> np.ndarray:
    """
    Normalized [4, X, Y, Z] float32 input in network channel order.
    """

    mask = subject.brain_mask
    channels = [
        normalize(subject.modalities[Modality(name)], mask).data
        for name in CHANNEL_ORDER
    ]

    return np.stack(channels).astype(np.float32)


def pad_to_patch(array: np.ndarray, size: int) -> np.ndarray:
    """
    Zero pad the trailing three axes up to ``size`` where they are smaller.
    """

    spatial = array.shape[-3:]
    pad = [(0, 0)] * (array.ndim - 3) + [(0, max(0, size - d)) for d in spatial]

    return np.pad(array, pad)


def grid_corners(
    dims: typing.Sequence[int], size: int, stride: int
) -> typing.List[Corner]:
    """
    Corners at stride steps per axis, plus a final corner clamped to the
    boundary so every voxel is covered.
    """

    if stride < 1 or stride > size:
        raise ShapeMismatch(f"stride {stride} must lie in 1..{size}")

    axes = []
    for d in dims:
        if d < size:
            raise ShapeMismatch(f"dimension {d} is smaller than patch size {size}")

        starts = list(range(0, d - size + 1, stride))
        if starts[-1] != d - size:
            starts.append(d - size)
        axes.append(starts)

    return [(a, b, c) for a, b, c in itertools.product(*axes)]


def _crop(array: np.ndarray, corner: Corner, size: int) -> np.ndarray:
    x, y, z = corner
    return array[..., x : x + size, y : y + size, z : z + size]


def _balanced_centers(
    classes: np.ndarray, brain: np.ndarray, n: int, rng: np.random.Generator
) -> typing.Tuple[np.ndarray, np.ndarray]:
    present = [int(c) for c in np.unique(classes) if c != 255]
    candidates = {}
    for c in present:
        voxels = classes == c
        if c == 0 and np.any(voxels & brain):
            voxels = voxels & brain
        candidates[c] = np.argwhere(voxels)

    picked = rng.choice(present, size=n)
    centers = np.empty((n, 3), dtype=np.int64)
    for i, c in enumerate(picked):
        pool = candidates[int(c)]
        centers[i] = pool[rng.integers(len(pool))]

    return centers, picked.astype(np.int64)


def sample_training_patches(
    subject: Subject,
    spec: PatchSpec,
    n: int,
    rng: np.random.Generator,
    inputs: typing.Optional[np.ndarray] = None,
) -> PatchBatch:
    """
    Class-first sampling: a class uniform among those present, then a uniform
    voxel of that class as the patch center. Grid mode draws from the
    non-overlapping patch grid instead.
    """

    if subject.ground_truth is None:
        raise NoForeground(f"subject {subject.id} has no label map")

    if inputs is None:
        inputs = stack_modalities(subject)

    size = spec.size
    volume = pad_to_patch(inputs, size)
    classes = label_classes(subject.ground_truth.data)
    padded_classes = pad_to_patch(classes, size)
    dims = np.array(volume.shape[1:])

    if spec.train_sampling == "grid":
        corners_list = grid_corners(tuple(dims), size, size)
        chosen = rng.choice(len(corners_list), size=n, replace=n > len(corners_list))
        corners = np.array([corners_list[i] for i in chosen], dtype=np.int64)
        centers = corners + size // 2
        center_classes = padded_classes[tuple(centers.T)].astype(np.int64)
    else:
        brain = subject.brain_mask.data
        centers, center_classes = _balanced_centers(classes, brain, n, rng)
        corners = np.clip(centers - size // 2, 0, dims - size)

    patches = np.empty((n, volume.shape[0], size, size, size), dtype=np.float32)
    targets = np.empty((n, size, size, size), dtype=np.int64)
    provenance = []
    for i, corner in enumerate(corners):
        key: Corner = (int(corner[0]), int(corner[1]), int(corner[2]))
        patches[i] = _crop(volume, key, size)
        targets[i] = _crop(padded_classes, key, size)
        provenance.append((subject.id, key))

    return PatchBatch(
        inputs=Tensor(patches),
        targets=targets,
        provenance=provenance,
        center_classes=center_classes,
    )


def inference_patches(
    inputs: np.ndarray, spec: PatchSpec
) -> typing.Iterator[typing.Tuple[Corner, np.ndarray]]:
    """
    Overlapping patches of an already padded input at ``spec.infer_stride``.
    """

    for corner in grid_corners(inputs.shape[1:], spec.size, spec.infer_stride):
        yield corner, _crop(inputs, corner, spec.size)


def stitch(
    patch_probs: typing.Iterable[typing.Tuple[Corner, typing.Any]],
    dims: typing.Sequence[int],
) -> np.ndarray:
    """
    Mean of the overlapping patch probabilities, [C, X, Y, Z].
    """

    total: typing.Optional[np.ndarray] = None
    count = np.zeros(tuple(dims), dtype=np.int64)
    for corner, probs in patch_probs:
        data = probs.data if isinstance(probs, Tensor) else np.asarray(probs)
        if data.ndim != 4:
            raise ShapeMismatch(f"patch probabilities must be 4D, got {data.shape}")

        if total is None:
            total = np.zeros((data.shape[0], *dims), dtype=np.float64)

        window = tuple(slice(c, c + s) for c, s in zip(corner, data.shape[1:]))
        if any(w.stop > d or w.start < 0 for w, d in zip(window, dims)):
            raise ShapeMismatch(f"patch at {corner} leaves the volume {tuple(dims)}")

        total[(slice(None),) + window] += data
        count[window] += 1

    if total is None or not count.all():
        missing = int((count == 0).sum())
        raise CoverageGap(f"{missing} voxels are not covered by any patch")

    return total / count

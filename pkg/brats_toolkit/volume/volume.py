import dataclasses
import enum
import typing

import numpy as np

from ..config import BRATS_LABELS
from ..error import DegenerateMask, EmptyMask, InvalidVolume


class Modality(enum.Enum):
    FLAIR = "flair"
    T1 = "t1"
    T1Gd = "t1ce"
    T2 = "t2"


class VolumeKind(enum.Enum):
    Intensity = "intensity"
    Label = "label"


Spacing = typing.Tuple[float, float, float]


@dataclasses.dataclass(frozen=True, eq=False)
class Volume:
    """
    3D scalar grid indexed [x, y, z]; files store it with x fastest.

    Intensity data is float32, label data is uint8 restricted to the BraTS
    alphabet, boolean masks are bool. The array is made read-only.
    """

    data: np.ndarray
    spacing: Spacing = (1.0, 1.0, 1.0)
    kind: VolumeKind = VolumeKind.Intensity

    def __post_init__(self) -> None:
        if self.data.ndim != 3 or any(d < 1 for d in self.data.shape):
            raise InvalidVolume(f"expected a 3D array, got shape {self.data.shape}")

        if len(self.spacing) != 3 or any(not s > 0 for s in self.spacing):
            raise InvalidVolume(f"spacing must be positive, got {self.spacing}")

        if self.kind == VolumeKind.Label and self.data.dtype != np.bool_:
            present = np.unique(self.data)
            unknown = set(present.tolist()) - set(BRATS_LABELS)
            if unknown:
                raise InvalidVolume(f"labels {sorted(unknown)} outside {BRATS_LABELS}")

        self.data.flags.writeable = False

    @property
    def dims(self) -> typing.Tuple[int, int, int]:
        x, y, z = self.data.shape
        return (x, y, z)

    @property
    def voxel_volume(self) -> float:
        return float(np.prod(self.spacing))

    @classmethod
    def intensity(
        cls, data: np.ndarray, spacing: Spacing = (1.0, 1.0, 1.0)
    ) -> "Volume":
        return cls(
            data=np.array(data, dtype=np.float32),
            spacing=tuple(float(s) for s in spacing),  # type: ignore
            kind=VolumeKind.Intensity,
        )

    @classmethod
    def label(
        cls, data: np.ndarray, spacing: Spacing = (1.0, 1.0, 1.0)
    ) -> "Volume":
        return cls(
            data=np.array(data, dtype=np.uint8),
            spacing=tuple(float(s) for s in spacing),  # type: ignore
            kind=VolumeKind.Label,
        )

    @classmethod
    def mask(
        cls, data: np.ndarray, spacing: Spacing = (1.0, 1.0, 1.0)
    ) -> "Volume":
        return cls(
            data=np.array(data, dtype=np.bool_),
            spacing=tuple(float(s) for s in spacing),  # type: ignore
            kind=VolumeKind.Label,
        )


@dataclasses.dataclass(frozen=True, eq=False)
class Subject:
    id: str
    modalities: typing.Mapping[Modality, Volume]
    ground_truth: typing.Optional[Volume] = dataclasses.field(default=None)
    grade: typing.Optional[str] = dataclasses.field(default=None)

    def __post_init__(self) -> None:
        volumes = list(self.modalities.values())
        if self.ground_truth is not None:
            volumes.append(self.ground_truth)

        if not volumes:
            raise InvalidVolume(f"subject {self.id} has no volumes")

        reference = volumes[0]
        for volume in volumes[1:]:
            if volume.dims != reference.dims or volume.spacing != reference.spacing:
                raise InvalidVolume(
                    f"subject {self.id} mixes grids {reference.dims} and {volume.dims}"
                )

    @property
    def dims(self) -> typing.Tuple[int, int, int]:
        return next(iter(self.modalities.values())).dims

    @property
    def spacing(self) -> Spacing:
        return next(iter(self.modalities.values())).spacing

    @property
    def brain_mask(self) -> Volume:
        return brain_mask(self)


def brain_mask(subject: Subject) -> Volume:
    """
    Brain voxels are those where any modality is nonzero (skull-stripped input).
    """

    mask = np.zeros(subject.dims, dtype=np.bool_)
    for volume in subject.modalities.values():
        mask |= volume.data != 0

    return Volume.mask(mask, subject.spacing)


def normalize(volume: Volume, mask: Volume) -> Volume:
    """
    Zero mean, unit population std over the masked voxels; zero elsewhere.
    """

    if volume.kind != VolumeKind.Intensity:
        raise InvalidVolume("only intensity volumes can be normalized")

    if volume.dims != mask.dims:
        raise InvalidVolume(f"mask dims {mask.dims} differ from volume {volume.dims}")

    inside = mask.data.astype(np.bool_)
    count = int(inside.sum())
    if count == 0:
        raise EmptyMask("normalization mask has no voxels")

    values = volume.data[inside].astype(np.float64)
    mean = values.mean()
    std = values.std()
    if count < 2 or std == 0:
        raise DegenerateMask(f"masked region is constant ({count} voxels)")

    out = np.zeros(volume.dims, dtype=np.float64)
    out[inside] = (values - mean) / std

    return Volume.intensity(out, volume.spacing)

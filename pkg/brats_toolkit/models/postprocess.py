import typing

import pydantic

from .base import BaseConfig


class CrfConfig(BaseConfig):
    """
    Grid Potts mean-field smoothing of class probabilities.
    """

    pairwise_weight: float = pydantic.Field(
        default=1.0, ge=0, description="Weight of neighbor agreement"
    )
    neighborhood: typing.Literal[6, 26] = pydantic.Field(
        default=6, description="Voxel neighborhood of the pairwise term"
    )
    iterations: int = pydantic.Field(default=5, ge=1, description="Mean-field sweeps")


class ComponentFilterConfig(BaseConfig):
    """
    Class wise removal of small connected components.
    """

    min_voxels: typing.Dict[int, int] = pydantic.Field(
        default_factory=lambda: {1: 100, 2: 100, 4: 100},
        description="Smallest kept component per BraTS label",
    )
    connectivity: typing.Literal[6, 26] = pydantic.Field(
        default=26, description="Voxel connectivity of components"
    )

    @pydantic.field_validator("min_voxels")
    @classmethod
    def check_min_voxels(cls, value: typing.Dict[int, int]) -> typing.Dict[int, int]:
        for label, size in value.items():
            if label not in (1, 2, 4):
                raise ValueError(f"label {label} is not a foreground BraTS label")

            if size < 0:
                raise ValueError("min_voxels must be non-negative")

        return value

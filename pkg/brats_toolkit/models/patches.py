import typing

import pydantic

from .base import BaseConfig


class PatchSpec(BaseConfig):
    """
    Cubic patch extraction for training and overlapping inference.
    """

    size: int = pydantic.Field(
        default=64, ge=1, description="Edge length of cubic patches"
    )
    train_sampling: typing.Literal["balanced", "grid"] = pydantic.Field(
        default="balanced",
        description="Class-balanced random centers or non-overlapping grid patches",
    )
    infer_stride: int = pydantic.Field(
        default=32, ge=1, description="Stride between inference patch corners"
    )
    infer_batch_size: int = pydantic.Field(
        default=4, ge=1, description="Patches per forward pass during inference"
    )

    @pydantic.model_validator(mode="after")
    def check_stride(self) -> "PatchSpec":
        if self.infer_stride > self.size:
            raise ValueError("infer_stride must not exceed size")

        return self

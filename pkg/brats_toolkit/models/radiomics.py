import typing

import pydantic

from .base import BaseConfig


TEXTURE_FAMILIES = ("glcm", "glrlm", "gldm", "glszm", "ngtdm")


class RadiomicsConfig(BaseConfig):
    """
    Radiomic feature matrix composition.
    """

    bin_count: int = pydantic.Field(
        default=32, ge=1, description="Fixed number of gray level bins"
    )
    regions: typing.List[typing.Literal["et", "tc", "wt"]] = pydantic.Field(
        default_factory=lambda: ["et", "tc", "wt"], description="Tumor regions"
    )
    modalities: typing.List[typing.Literal["flair", "t1", "t1ce", "t2"]] = (
        pydantic.Field(
            default_factory=lambda: ["flair", "t1", "t1ce", "t2"],
            description="Modalities sampled inside each region",
        )
    )
    families: typing.List[
        typing.Literal["firstorder", "glcm", "glrlm", "gldm", "glszm", "ngtdm"]
    ] = pydantic.Field(
        default_factory=lambda: ["firstorder", *TEXTURE_FAMILIES],
        description="Intensity feature families",
    )
    shape: bool = pydantic.Field(default=True, description="Include shape features")
    clinical: bool = pydantic.Field(
        default=True, description="Include age and resection status columns"
    )
    segmentation: typing.Literal["ground_truth", "predicted"] = pydantic.Field(
        default="ground_truth", description="Source of the region masks"
    )

import typing

import pydantic

from .base import BaseConfig


class IntensityProfile(BaseConfig):
    """
    Mean intensity of each tissue class for one modality.
    """

    brain: float = pydantic.Field(description="Healthy brain")
    necrosis: float = pydantic.Field(description="Necrotic/non-enhancing core, label 1")
    edema: float = pydantic.Field(description="Peritumoral edema, label 2")
    enhancing: float = pydantic.Field(description="Enhancing tumor, label 4")


def default_profiles() -> typing.Dict[str, IntensityProfile]:
    return {
        "flair": IntensityProfile(brain=100, necrosis=90, edema=190, enhancing=150),
        "t1": IntensityProfile(brain=100, necrosis=55, edema=85, enhancing=110),
        "t1ce": IntensityProfile(brain=100, necrosis=60, edema=95, enhancing=230),
        "t2": IntensityProfile(brain=100, necrosis=210, edema=175, enhancing=140),
    }


class PhantomSpec(BaseConfig):
    """
    Synthetic multimodal subjects with nested ellipsoid tumors.
    """

    dims: typing.Tuple[int, int, int] = pydantic.Field(
        default=(96, 96, 96), description="Volume dimensions"
    )
    spacing: typing.Tuple[float, float, float] = pydantic.Field(
        default=(1.0, 1.0, 1.0), description="Voxel spacing in mm"
    )
    profiles: typing.Dict[str, IntensityProfile] = pydantic.Field(
        default_factory=default_profiles, description="Class means per modality"
    )
    noise_std: float = pydantic.Field(
        default=10.0, ge=0, description="Gaussian noise standard deviation"
    )
    brain_fill: float = pydantic.Field(
        default=0.85, gt=0, le=1, description="Brain ellipsoid radii over half dims"
    )
    wt_radius: typing.Tuple[float, float] = pydantic.Field(
        default=(8.0, 20.0), description="Range of whole tumor ellipsoid radii"
    )
    tc_ratio: typing.Tuple[float, float] = pydantic.Field(
        default=(0.45, 0.7), description="Range of core radii over whole tumor radii"
    )
    et_ratio: typing.Tuple[float, float] = pydantic.Field(
        default=(0.4, 0.7), description="Range of enhancing radii over core radii"
    )
    hgg_fraction: float = pydantic.Field(
        default=0.8, ge=0, le=1, description="Probability of a high grade subject"
    )
    hard_fraction: float = pydantic.Field(
        default=0.0, ge=0, le=1, description="Fraction of subjects with amplified noise"
    )
    hard_noise_multiplier: float = pydantic.Field(
        default=3.0, ge=1, description="Noise multiplier of hard subjects"
    )
    survival_intercept: float = pydantic.Field(
        default=700.0, description="Survival days at zero tumor burden (a)"
    )
    survival_slope: float = pydantic.Field(
        default=2500.0, description="Days lost per unit WT/brain volume fraction (b)"
    )
    survival_noise: float = pydantic.Field(
        default=20.0, ge=0, description="Survival noise standard deviation in days"
    )
    seed: int = pydantic.Field(default=0, description="Generator seed")

    @pydantic.model_validator(mode="after")
    def check_ranges(self) -> "PhantomSpec":
        for name in ("wt_radius", "tc_ratio", "et_ratio"):
            low, high = getattr(self, name)
            if not 0 < low <= high:
                raise ValueError(f"{name} must be an increasing positive range")

        if self.tc_ratio[1] >= 1 or self.et_ratio[1] >= 1:
            raise ValueError("nested radii ratios must stay below 1")

        if any(d < 1 for d in self.dims) or any(s <= 0 for s in self.spacing):
            raise ValueError("dims and spacing must be positive")

        return self

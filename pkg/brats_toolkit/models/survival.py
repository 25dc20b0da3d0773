import typing

import pydantic

from .base import BaseConfig


class ForestParams(BaseConfig):
    """
    Random forest regressor hyperparameters.
    """

    n_trees: int = pydantic.Field(default=200, ge=1, description="Number of trees")
    max_depth: typing.Optional[int] = pydantic.Field(
        default=None, ge=1, description="Depth limit, none grows until leaves are pure"
    )
    min_leaf: int = pydantic.Field(default=2, ge=1, description="Smallest leaf size")
    max_features: typing.Optional[int] = pydantic.Field(
        default=None, ge=1, description="Features per split, ceil(p/3) if unset"
    )
    bootstrap: bool = pydantic.Field(
        default=True, description="Bootstrap rows per tree"
    )


class SurvivalBins(BaseConfig):
    """
    Overall survival classes: short < short_mid <= mid < mid_long <= long.
    """

    short_mid: float = pydantic.Field(default=300.0, description="Short/mid boundary")
    mid_long: float = pydantic.Field(default=450.0, description="Mid/long boundary")

    @pydantic.model_validator(mode="after")
    def check_order(self) -> "SurvivalBins":
        if not self.short_mid < self.mid_long:
            raise ValueError("bin boundaries must be strictly increasing")

        return self


class SurvivalConfig(BaseConfig):
    """
    Overall survival regression pipeline.
    """

    top_k: int = pydantic.Field(default=32, ge=1, description="Selected features")
    forest: ForestParams = pydantic.Field(default_factory=ForestParams)
    importance: typing.Literal["impurity", "permutation"] = pydantic.Field(
        default="impurity", description="Feature ranking method"
    )
    bins: SurvivalBins = pydantic.Field(default_factory=SurvivalBins)
    gtr_only: bool = pydantic.Field(
        default=False, description="Train only on gross total resection cases"
    )

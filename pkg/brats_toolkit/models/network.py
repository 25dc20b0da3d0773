import typing

import pydantic

from .base import BaseConfig


class NetworkSpec(BaseConfig):
    """
    Dense connectivity encoder-decoder architecture.
    """

    in_channels: int = pydantic.Field(default=4, ge=1, description="Input modalities")
    num_classes: int = pydantic.Field(default=4, ge=2, description="Output classes")
    growth_rate: int = pydantic.Field(
        default=4, ge=1, description="Feature maps added by each dense layer (k)"
    )
    layers_per_dense_block: typing.List[int] = pydantic.Field(
        default_factory=lambda: [4, 4, 4, 4],
        description="Dense layers per encoder level, last entry is the bottleneck",
    )
    num_transition_downs: int = pydantic.Field(
        default=3, ge=1, description="Resolution halvings in the encoder"
    )
    initial_conv_channels: int = pydantic.Field(
        default=16, ge=1, description="Output channels of the first 3x3x3 convolution"
    )

    @pydantic.model_validator(mode="after")
    def check_levels(self) -> "NetworkSpec":
        if len(self.layers_per_dense_block) != self.num_transition_downs + 1:
            raise ValueError(
                "layers_per_dense_block needs one entry per transition down"
                " plus the bottleneck"
            )

        if any(layers < 1 for layers in self.layers_per_dense_block):
            raise ValueError("dense blocks need at least one layer")

        return self

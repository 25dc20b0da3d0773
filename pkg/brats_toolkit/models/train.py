import typing

import pydantic

from .base import BaseConfig


class TrainConfig(BaseConfig):
    """
    Training protocol, including the hard mining fine-tuning rounds.
    """

    batch_size: int = pydantic.Field(default=4, ge=1, description="Patches per batch")
    lr0: float = pydantic.Field(default=1e-4, gt=0, description="Initial learning rate")
    plateau_patience: int = pydantic.Field(
        default=5, ge=1, description="Epochs without validation gain before decay"
    )
    lr_decay_factor: float = pydantic.Field(
        default=0.9, gt=0, le=1, description="Learning rate multiplier on plateau"
    )
    split: typing.Tuple[float, float, float] = pydantic.Field(
        default=(0.70, 0.20, 0.10), description="Train, validation, test ratios"
    )
    loss: typing.Literal["weighted_ce", "dice"] = pydantic.Field(
        default="weighted_ce", description="Training objective"
    )
    hard_mining_thresholds: typing.List[float] = pydantic.Field(
        default_factory=lambda: [0.6, 0.75],
        description="Ascending DSC thresholds, one fine-tuning round each",
    )
    epochs: int = pydantic.Field(default=20, ge=1, description="Base training epochs")
    fine_tune_epochs: int = pydantic.Field(
        default=5, ge=1, description="Epochs per hard mining round"
    )
    patches_per_subject: int = pydantic.Field(
        default=4, ge=1, description="Training patches drawn per subject each epoch"
    )
    validation_patches: int = pydantic.Field(
        default=2, ge=1, description="Fixed validation patches per validation subject"
    )
    queue_size: int = pydantic.Field(
        default=8, ge=1, description="Bounded queue of prepared batches"
    )

    @pydantic.model_validator(mode="after")
    def check_protocol(self) -> "TrainConfig":
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError("split ratios must sum to 1")

        if any(ratio < 0 for ratio in self.split):
            raise ValueError("split ratios must be non-negative")

        thresholds = self.hard_mining_thresholds
        if any(not 0 < t <= 1 for t in thresholds):
            raise ValueError("hard mining thresholds must lie in (0, 1]")

        if any(a >= b for a, b in zip(thresholds, thresholds[1:])):
            raise ValueError("hard mining thresholds must be strictly increasing")

        return self

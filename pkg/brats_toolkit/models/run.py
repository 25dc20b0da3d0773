import typing

import pydantic
import pydantic_core

from ..error import LibError, ParseError
from .base import BaseConfig
from .network import NetworkSpec
from .patches import PatchSpec
from .paths import PathsConfig
from .phantom import PhantomSpec
from .postprocess import ComponentFilterConfig, CrfConfig
from .radiomics import RadiomicsConfig
from .survival import SurvivalConfig
from .train import TrainConfig


class RunConfig(BaseConfig):
    """
    Root configuration of every subcommand.
    """

    network: NetworkSpec = pydantic.Field(default_factory=NetworkSpec)
    patches: PatchSpec = pydantic.Field(default_factory=PatchSpec)
    train: TrainConfig = pydantic.Field(default_factory=TrainConfig)
    crf: CrfConfig = pydantic.Field(default_factory=CrfConfig)
    components: ComponentFilterConfig = pydantic.Field(
        default_factory=ComponentFilterConfig
    )
    radiomics: RadiomicsConfig = pydantic.Field(default_factory=RadiomicsConfig)
    survival: SurvivalConfig = pydantic.Field(default_factory=SurvivalConfig)
    phantom: PhantomSpec = pydantic.Field(default_factory=PhantomSpec)
    paths: PathsConfig = pydantic.Field(default_factory=PathsConfig)
    seed: int = pydantic.Field(default=0, description="Seed of every random stream")
    threads: int = pydantic.Field(
        default=1, ge=1, description="Worker cap, 1 is bitwise reproducible"
    )

    @pydantic.model_validator(mode="after")
    def check_patch_network(self) -> "RunConfig":
        factor = 2**self.network.num_transition_downs
        if factor > self.patches.size or self.patches.size % factor:
            raise ValueError(
                f"patch size {self.patches.size} is not divisible by {factor}"
            )

        return self

    @classmethod
    def parse(
        cls, data: typing.Dict[str, typing.Any]
    ) -> typing.Tuple[typing.Optional["RunConfig"], typing.Sequence[LibError]]:
        try:
            return cls(**data), []
        except pydantic_core._pydantic_core.ValidationError as e:
            return None, [
                ParseError(
                    path=".".join(str(p) for p in error["loc"]) or "config",
                    msg=(error.get("msg") or "").lower(),
                )
                for error in e.errors()
            ]

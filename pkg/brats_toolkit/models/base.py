import pydantic


class BaseConfig(pydantic.BaseModel):
    """
    Configuration block, unknown keys are rejected.
    """

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

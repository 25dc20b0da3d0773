import typing

from ..autodiff.checkpoint import load_checkpoint, save_checkpoint
from ..error import CheckpointError
from ..models.network import NetworkSpec
from .dense_fcn import NetworkState, enumerate_layers


def save_state(path: str, state: NetworkState, stage: str = "base") -> None:
    save_checkpoint(
        path,
        state.params,
        {"network": state.spec.model_dump(mode="json"), "stage": stage},
    )


def load_state(path: str) -> typing.Tuple[NetworkState, str]:
    """
    Network state and the training stage it was saved after.
    """

    tensors, meta = load_checkpoint(path)
    try:
        spec = NetworkSpec.model_validate(meta["network"])
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"{path} has no valid network description") from e

    expected = {}
    for layer in enumerate_layers(spec):
        expected[f"{layer.name}.weight"] = layer.weight_shape
        expected[f"{layer.name}.bias"] = (layer.out_channels,)

    if set(expected) != set(tensors):
        raise CheckpointError(f"{path} does not match its network description")

    for name, shape in expected.items():
        if tensors[name].shape != tuple(shape):
            raise CheckpointError(f"{name} has shape {tensors[name].shape}")

    return NetworkState(spec=spec, params=tensors), str(meta.get("stage", "base"))

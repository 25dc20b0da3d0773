"""
3D dense connectivity encoder-decoder.

Parameter keys:

    initial.conv                    3x3x3, in_channels -> initial_conv_channels
    down{i}.layer{j}                3x3x3 dense layer of encoder level i
    down{i}.td                      1x1x1 transition down, channels preserved
    bottleneck.layer{j}             3x3x3 dense layer at the coarsest level
    up{i}.tu                        2x2x2 stride 2 transposed convolution
    up{i}.layer{j}                  3x3x3 dense layer mirroring encoder level i
    final.conv                      1x1x1 -> num_classes

Each key holds ``<key>.weight`` and ``<key>.bias``.
"""

import dataclasses
import logging
import typing

import numpy as np

from ..autodiff import Tensor, concat, conv3d, conv3d_transposed, maxpool3d, relu
from ..config import REFERENCE_LAYER_COUNT
from ..error import InvalidSpec, ShapeMismatch
from ..models.network import NetworkSpec


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class LayerShape:
    name: str
    kind: typing.Literal["conv", "transposed"]
    in_channels: int
    out_channels: int
    kernel: int

    @property
    def weight_shape(self) -> typing.Tuple[int, ...]:
        k = (self.kernel,) * 3
        if self.kind == "transposed":
            return (self.in_channels, self.out_channels, *k)

        return (self.out_channels, self.in_channels, *k)


def enumerate_layers(spec: NetworkSpec) -> typing.List[LayerShape]:
    """
    Every parameterized layer in forward order, with its channel arithmetic.
    """

    levels = spec.num_transition_downs
    k = spec.growth_rate
    layers = [
        LayerShape(
            "initial.conv", "conv", spec.in_channels, spec.initial_conv_channels, 3
        )
    ]

    channels = spec.initial_conv_channels
    skips = []
    for i in range(levels):
        for j in range(spec.layers_per_dense_block[i]):
            layers.append(
                LayerShape(f"down{i}.layer{j}", "conv", channels + j * k, k, 3)
            )
        channels += spec.layers_per_dense_block[i] * k
        skips.append(channels)
        layers.append(LayerShape(f"down{i}.td", "conv", channels, channels, 1))

    for j in range(spec.layers_per_dense_block[levels]):
        layers.append(
            LayerShape(f"bottleneck.layer{j}", "conv", channels + j * k, k, 3)
        )
    upsampled = spec.layers_per_dense_block[levels] * k

    for i in reversed(range(levels)):
        layers.append(LayerShape(f"up{i}.tu", "transposed", upsampled, upsampled, 2))
        channels = upsampled + skips[i]
        for j in range(spec.layers_per_dense_block[i]):
            layers.append(
                LayerShape(f"up{i}.layer{j}", "conv", channels + j * k, k, 3)
            )
        upsampled = spec.layers_per_dense_block[i] * k
        channels += upsampled

    layers.append(LayerShape("final.conv", "conv", channels, spec.num_classes, 1))

    return layers


def count_layers(spec: NetworkSpec) -> int:
    return len(enumerate_layers(spec))


@dataclasses.dataclass
class NetworkState:
    spec: NetworkSpec
    params: typing.Dict[str, Tensor]

    def clone(self) -> "NetworkState":
        return NetworkState(
            spec=self.spec,
            params={
                name: Tensor(tensor.data.copy(), requires_grad=tensor.requires_grad)
                for name, tensor in self.params.items()
            },
        )

    def parameter_count(self) -> int:
        return sum(int(tensor.data.size) for tensor in self.params.values())

    def zero_grad(self) -> None:
        for tensor in self.params.values():
            tensor.zero_grad()


def parameter_count(state: NetworkState) -> int:
    return state.parameter_count()


def build(
    spec: NetworkSpec, seed: int, dtype: typing.Any = np.float32
) -> NetworkState:
    """
    He-uniform weights, zero biases. Deterministic for a given seed.
    """

    if len(spec.layers_per_dense_block) != spec.num_transition_downs + 1:
        raise InvalidSpec(
            "layers_per_dense_block needs num_transition_downs + 1 entries"
        )

    rng = np.random.default_rng(seed)
    params: typing.Dict[str, Tensor] = {}
    for layer in enumerate_layers(spec):
        fan_in = layer.in_channels * layer.kernel**3
        bound = np.sqrt(6.0 / fan_in)
        weight = rng.uniform(-bound, bound, size=layer.weight_shape)

        params[f"{layer.name}.weight"] = Tensor(
            weight.astype(dtype), requires_grad=True
        )
        params[f"{layer.name}.bias"] = Tensor(
            np.zeros(layer.out_channels, dtype=dtype), requires_grad=True
        )

    state = NetworkState(spec=spec, params=params)

    layer_count = count_layers(spec)
    logger.info(
        "Built network with %d layers (reference architecture has %d), %d parameters",
        layer_count,
        REFERENCE_LAYER_COUNT,
        state.parameter_count(),
    )

    return state


def _conv(state: NetworkState, name: str, x: Tensor, padding: int = 0) -> Tensor:
    return conv3d(
        x,
        state.params[f"{name}.weight"],
        state.params[f"{name}.bias"],
        padding=padding,
    )


def _dense_block(
    state: NetworkState, prefix: str, x: Tensor, layers: int
) -> typing.Tuple[Tensor, Tensor]:
    """
    Returns (input concatenated with new features, new features only).
    """

    features = [x]
    new: typing.List[Tensor] = []
    for j in range(layers):
        inputs = features[0] if len(features) == 1 else concat(features, axis=1)
        out = relu(_conv(state, f"{prefix}.layer{j}", inputs, padding=1))
        features.append(out)
        new.append(out)

    new_features = new[0] if len(new) == 1 else concat(new, axis=1)
    expected = x.shape[1] + layers * state.spec.growth_rate
    full = concat(features, axis=1)
    assert full.shape[1] == expected

    return full, new_features


def forward(state: NetworkState, inputs: Tensor) -> Tensor:
    """
    [N, in_channels, D, H, W] -> logits [N, num_classes, D, H, W].
    """

    spec = state.spec
    if inputs.data.ndim != 5 or inputs.shape[1] != spec.in_channels:
        raise ShapeMismatch(
            f"expected [N, {spec.in_channels}, D, H, W] input, got {inputs.shape}"
        )

    factor = 2**spec.num_transition_downs
    if any(d % factor for d in inputs.shape[2:]):
        raise ShapeMismatch(
            f"spatial dims {inputs.shape[2:]} are not divisible by {factor}"
        )

    x = relu(_conv(state, "initial.conv", inputs, padding=1))
    full = x

    skips = []
    for i in range(spec.num_transition_downs):
        x, _ = _dense_block(state, f"down{i}", x, spec.layers_per_dense_block[i])
        skips.append(x)
        x = maxpool3d(_conv(state, f"down{i}.td", x), 2)

    _, x = _dense_block(
        state, "bottleneck", x, spec.layers_per_dense_block[spec.num_transition_downs]
    )

    for i in reversed(range(spec.num_transition_downs)):
        up = conv3d_transposed(
            x,
            state.params[f"up{i}.tu.weight"],
            state.params[f"up{i}.tu.bias"],
            stride=2,
        )
        full, x = _dense_block(
            state,
            f"up{i}",
            concat([up, skips[i]], axis=1),
            spec.layers_per_dense_block[i],
        )

    return _conv(state, "final.conv", full)

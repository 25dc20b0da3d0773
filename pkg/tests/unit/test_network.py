import os.path
import tempfile

import numpy as np
import pytest

from brats_toolkit.autodiff import Tensor
from brats_toolkit.autodiff.checkpoint import save_checkpoint
from brats_toolkit.config import BRATS_LABELS
from brats_toolkit.error import CheckpointError, InvalidSpec, ShapeMismatch
from brats_toolkit.models.network import NetworkSpec
from brats_toolkit.models.patches import PatchSpec
from brats_toolkit.network import (
    build,
    count_layers,
    enumerate_layers,
    forward,
    load_state,
    predict_probabilities,
    probabilities_to_labels,
    save_state,
)
from brats_toolkit.volume import Subject


def test_count_layers(tiny_network: NetworkSpec) -> None:
    assert count_layers(tiny_network) == 9

    deeper = tiny_network.model_copy(update={"layers_per_dense_block": [3, 1]})
    assert count_layers(deeper) == 11

    assert count_layers(NetworkSpec()) == 36


def test_channel_arithmetic(tiny_network: NetworkSpec) -> None:
    layers = {layer.name: layer for layer in enumerate_layers(tiny_network)}

    assert layers["down0.layer1"].in_channels == 4 + 2
    assert layers["down0.td"].in_channels == 8
    assert layers["up0.tu"].weight_shape == (2, 2, 2, 2, 2)
    assert layers["up0.layer0"].in_channels == 2 + 8
    assert layers["final.conv"].in_channels == 10 + 4
    assert layers["final.conv"].out_channels == 4


def test_build_deterministic(tiny_network: NetworkSpec) -> None:
    a = build(tiny_network, seed=5)
    b = build(tiny_network, seed=5)
    c = build(tiny_network, seed=6)

    assert a.params.keys() == b.params.keys()
    for name in a.params:
        assert np.array_equal(a.params[name].data, b.params[name].data)

    assert not np.array_equal(
        a.params["initial.conv.weight"].data, c.params["initial.conv.weight"].data
    )
    assert np.all(a.params["final.conv.bias"].data == 0)


def test_build_mismatched_levels(tiny_network: NetworkSpec) -> None:
    broken = tiny_network.model_construct(
        **{**tiny_network.model_dump(), "layers_per_dense_block": [2]}
    )

    with pytest.raises(InvalidSpec):
        build(broken, seed=0)


def test_forward_shape(tiny_network: NetworkSpec) -> None:
    state = build(tiny_network, seed=0)
    inputs = Tensor(np.random.default_rng(0).normal(size=(2, 4, 16, 16, 16)))

    logits = forward(state, inputs)

    assert logits.shape == (2, 4, 16, 16, 16)
    assert np.all(np.isfinite(logits.data))


def test_forward_zero_input(tiny_network: NetworkSpec) -> None:
    state = build(tiny_network, seed=0)

    logits = forward(state, Tensor(np.zeros((1, 4, 8, 8, 8), dtype=np.float32)))

    assert np.all(np.isfinite(logits.data))


def test_forward_shape_errors(tiny_network: NetworkSpec) -> None:
    state = build(tiny_network, seed=0)

    with pytest.raises(ShapeMismatch):
        forward(state, Tensor(np.zeros((1, 3, 8, 8, 8))))

    with pytest.raises(ShapeMismatch):
        forward(state, Tensor(np.zeros((1, 4, 7, 8, 8))))

    with pytest.raises(ShapeMismatch):
        forward(state, Tensor(np.zeros((4, 8, 8, 8))))


def test_gradients(tiny_network: NetworkSpec) -> None:
    rng = np.random.default_rng(1)
    state = build(tiny_network, seed=2, dtype=np.float64)
    inputs = rng.normal(size=(1, 4, 4, 4, 4))
    weights = rng.normal(size=(1, 4, 4, 4, 4))

    def objective() -> float:
        return float((forward(state, Tensor(inputs)).data * weights).sum())

    state.zero_grad()
    forward(state, Tensor(inputs)).backward(weights)
    analytic = {name: np.array(t.grad) for name, t in state.params.items()}

    checks = [
        ("initial.conv.weight", (1, 2, 1, 1, 0)),
        ("down0.layer1.weight", (0, 5, 2, 1, 1)),
        ("bottleneck.layer0.bias", (1,)),
        ("up0.tu.weight", (1, 0, 1, 0, 1)),
        ("final.conv.weight", (3, 9, 0, 0, 0)),
    ]
    epsilon = 1e-6
    for name, index in checks:
        data = state.params[name].data
        original = data[index]
        data[index] = original + epsilon
        plus = objective()
        data[index] = original - epsilon
        minus = objective()
        data[index] = original

        numeric = (plus - minus) / (2 * epsilon)
        assert analytic[name][index] == pytest.approx(numeric, rel=1e-4, abs=1e-6)


def test_checkpoint_round_trip(tiny_network: NetworkSpec) -> None:
    state = build(tiny_network, seed=4)

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "model.ckpt")
        save_state(path, state, stage="hard_mining_2")
        loaded, stage = load_state(path)

    assert stage == "hard_mining_2"
    assert loaded.spec == tiny_network
    for name, tensor in state.params.items():
        assert np.array_equal(loaded.params[name].data, tensor.data)


def test_checkpoint_mismatch(tiny_network: NetworkSpec) -> None:
    state = build(tiny_network, seed=4)
    del state.params["final.conv.bias"]

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "model.ckpt")
        save_checkpoint(path, state.params, {"network": tiny_network.model_dump()})

        with pytest.raises(CheckpointError):
            load_state(path)

        save_checkpoint(path, state.params, {})

        with pytest.raises(CheckpointError):
            load_state(path)


def test_predict_probabilities(
    tiny_network: NetworkSpec, phantom_subject: Subject
) -> None:
    state = build(tiny_network, seed=0)
    spec = PatchSpec(size=8, infer_stride=4, infer_batch_size=3)

    probs = predict_probabilities(state, phantom_subject, spec)

    assert probs.shape == (4, *phantom_subject.dims)
    assert np.allclose(probs.sum(axis=0), 1.0, atol=1e-5)

    labels = probabilities_to_labels(probs)
    assert set(np.unique(labels).tolist()) <= set(BRATS_LABELS)


def test_probabilities_to_labels() -> None:
    probs = np.zeros((4, 1, 1, 4))
    for c in range(4):
        probs[c, 0, 0, c] = 1.0

    assert probabilities_to_labels(probs).reshape(-1).tolist() == [0, 1, 2, 4]


@pytest.mark.slow
def test_default_network_forward() -> None:
    state = build(NetworkSpec(), seed=0)

    logits = forward(state, Tensor(np.zeros((1, 4, 64, 64, 64), dtype=np.float32)))

    assert logits.shape == (1, 4, 64, 64, 64)

import dataclasses
import typing

import numpy as np

from .tensor import Tensor


@dataclasses.dataclass
class AdamState:
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: typing.Dict[str, np.ndarray] = dataclasses.field(default_factory=dict)
    v: typing.Dict[str, np.ndarray] = dataclasses.field(default_factory=dict)


def adam_step(
    state: AdamState,
    params: typing.Mapping[str, Tensor],
    grads: typing.Mapping[str, typing.Optional[np.ndarray]],
    lr: float,
) -> AdamState:
    """
    One bias-corrected Adam update, parameters are modified in place.
    """

    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step

    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            continue

        g = np.asarray(grad, dtype=np.float64)
        m = state.m.get(name, np.zeros_like(g))
        v = state.v.get(name, np.zeros_like(g))

        m = state.beta1 * m + (1 - state.beta1) * g
        v = state.beta2 * v + (1 - state.beta2) * g * g
        state.m[name], state.v[name] = m, v

        update = lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        param.data = (param.data.astype(np.float64) - update).astype(param.data.dtype)

    return state

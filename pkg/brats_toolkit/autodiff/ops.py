"""
Operators of the segmentation network. Inner products run in float64 and
results are stored in the dtype of the inputs.
"""

import itertools
import typing

import numpy as np

from ..error import ShapeMismatch
from .tensor import Tensor, result


Triple = typing.Tuple[int, int, int]
Grads = typing.Sequence[typing.Optional[np.ndarray]]


def _triple(value: typing.Union[int, typing.Sequence[int]]) -> Triple:
    if isinstance(value, int):
        return (value, value, value)

    a, b, c = value
    return (int(a), int(b), int(c))


def _window(start: Triple, stride: Triple, count: Triple) -> typing.Tuple[slice, ...]:
    return tuple(
        slice(o, o + s * (n - 1) + 1, s) for o, s, n in zip(start, stride, count)
    )


def conv3d(
    x: Tensor,
    kernel: Tensor,
    bias: typing.Optional[Tensor] = None,
    stride: typing.Union[int, typing.Sequence[int]] = 1,
    padding: typing.Union[int, typing.Sequence[int]] = 0,
) -> Tensor:
    """
    Cross-correlation of x [N, Cin, D, H, W] with kernel [Cout, Cin, kd, kh, kw].
    """

    s, p = _triple(stride), _triple(padding)
    if x.data.ndim != 5 or kernel.data.ndim != 5:
        raise ShapeMismatch(f"conv3d expects 5D tensors, got {x.shape}, {kernel.shape}")

    n, c_in = x.shape[:2]
    c_out, k_in = kernel.shape[:2]
    k: Triple = kernel.shape[2:]  # type: ignore
    if c_in != k_in:
        raise ShapeMismatch(f"input has {c_in} channels, kernel expects {k_in}")

    if bias is not None and bias.shape != (c_out,):
        raise ShapeMismatch(f"bias shape {bias.shape} != ({c_out},)")

    if any(v < 1 for v in s):
        raise ShapeMismatch(f"stride {s} must be positive")

    out_dims = tuple(
        (d + 2 * pad - kk) // st + 1 for d, pad, kk, st in zip(x.shape[2:], p, k, s)
    )
    if any(d + 2 * pad < kk for d, pad, kk in zip(x.shape[2:], p, k)):
        raise ShapeMismatch(f"padded input {x.shape[2:]} smaller than kernel {k}")

    padded = np.pad(
        x.data.astype(np.float64),
        ((0, 0), (0, 0), (p[0], p[0]), (p[1], p[1]), (p[2], p[2])),
    )
    weights = kernel.data.astype(np.float64)

    # channel-last accumulator keeps tensordot output contiguous
    out = np.zeros((n, *out_dims, c_out))
    for offset in itertools.product(*(range(kk) for kk in k)):
        index = (slice(None), slice(None), *_window(offset, s, out_dims))
        w = weights[(slice(None), slice(None)) + offset]
        out += np.tensordot(padded[index], w, axes=([1], [1]))

    if bias is not None:
        out += bias.data.astype(np.float64)

    def backward(g: np.ndarray) -> Grads:
        g_last = np.moveaxis(g, 1, -1)
        grad_padded = np.zeros_like(padded)
        grad_kernel = np.zeros_like(weights)
        for offset in itertools.product(*(range(kk) for kk in k)):
            index = (slice(None), slice(None), *_window(offset, s, out_dims))
            w = weights[(slice(None), slice(None)) + offset]
            grad_kernel[(slice(None), slice(None)) + offset] = np.tensordot(
                g_last, padded[index], axes=([0, 1, 2, 3], [0, 2, 3, 4])
            )
            grad_padded[index] += np.moveaxis(
                np.tensordot(g_last, w, axes=([4], [0])), -1, 1
            )

        grad_x = grad_padded[
            :,
            :,
            p[0] : p[0] + x.shape[2],
            p[1] : p[1] + x.shape[3],
            p[2] : p[2] + x.shape[4],
        ]
        grads: typing.List[typing.Optional[np.ndarray]] = [grad_x, grad_kernel]
        if bias is not None:
            grads.append(g.sum(axis=(0, 2, 3, 4)))

        return grads

    parents = [x, kernel] + ([bias] if bias is not None else [])

    return result(np.moveaxis(out, -1, 1), parents, backward, "conv3d")


def conv3d_transposed(
    x: Tensor,
    kernel: Tensor,
    bias: typing.Optional[Tensor] = None,
    stride: typing.Union[int, typing.Sequence[int]] = 2,
    padding: typing.Union[int, typing.Sequence[int]] = 0,
) -> Tensor:
    """
    Adjoint of conv3d: x [N, Cin, D, H, W], kernel [Cin, Cout, kd, kh, kw].

    Output extent per axis is (D - 1) * stride + k - 2 * padding.
    """

    s, p = _triple(stride), _triple(padding)
    if x.data.ndim != 5 or kernel.data.ndim != 5:
        raise ShapeMismatch(
            f"conv3d_transposed expects 5D tensors, got {x.shape}, {kernel.shape}"
        )

    n, c_in = x.shape[:2]
    k_in, c_out = kernel.shape[:2]
    k: Triple = kernel.shape[2:]  # type: ignore
    if c_in != k_in:
        raise ShapeMismatch(f"input has {c_in} channels, kernel expects {k_in}")

    if bias is not None and bias.shape != (c_out,):
        raise ShapeMismatch(f"bias shape {bias.shape} != ({c_out},)")

    if any(v < 1 for v in s):
        raise ShapeMismatch(f"stride {s} must be positive")

    in_dims: Triple = x.shape[2:]  # type: ignore
    full_dims = tuple((d - 1) * st + kk for d, st, kk in zip(in_dims, s, k))
    out_dims = tuple(f - 2 * pad for f, pad in zip(full_dims, p))
    if any(d < 1 for d in out_dims):
        raise ShapeMismatch(f"padding {p} removes the whole output {full_dims}")

    x_last = np.moveaxis(x.data.astype(np.float64), 1, -1)
    weights = kernel.data.astype(np.float64)

    full = np.zeros((n, *full_dims, c_out))
    for offset in itertools.product(*(range(kk) for kk in k)):
        index = (slice(None),) + _window(offset, s, in_dims)
        w = weights[(slice(None), slice(None)) + offset]
        full[index] += np.tensordot(x_last, w, axes=([4], [0]))

    crop = (slice(None),) + tuple(
        slice(pad, pad + d) for pad, d in zip(p, out_dims)
    )
    out = full[crop]
    if bias is not None:
        out = out + bias.data.astype(np.float64)

    def backward(g: np.ndarray) -> Grads:
        g_full = np.zeros((n, *full_dims, c_out))
        g_full[crop] = np.moveaxis(g, 1, -1)

        grad_x = np.zeros_like(x_last)
        grad_kernel = np.zeros_like(weights)
        for offset in itertools.product(*(range(kk) for kk in k)):
            window = g_full[(slice(None),) + _window(offset, s, in_dims)]
            w = weights[(slice(None), slice(None)) + offset]
            grad_x += np.tensordot(window, w, axes=([4], [1]))
            grad_kernel[(slice(None), slice(None)) + offset] = np.tensordot(
                x_last, window, axes=([0, 1, 2, 3], [0, 1, 2, 3])
            )

        grads: typing.List[typing.Optional[np.ndarray]] = [
            np.moveaxis(grad_x, -1, 1),
            grad_kernel,
        ]
        if bias is not None:
            grads.append(g.sum(axis=(0, 2, 3, 4)))

        return grads

    parents = [x, kernel] + ([bias] if bias is not None else [])

    return result(np.moveaxis(out, -1, 1), parents, backward, "conv3d_transposed")


def relu(x: Tensor) -> Tensor:
    positive = x.data > 0

    def backward(g: np.ndarray) -> Grads:
        return [g * positive]

    data = np.where(positive, x.data, 0).astype(np.float64)

    return result(data, [x], backward, "relu")


def concat(xs: typing.Sequence[Tensor], axis: int = 1) -> Tensor:
    if not xs:
        raise ShapeMismatch("concat of no tensors")

    ndim = len(xs[0].shape)
    axis = axis % ndim
    for t in xs[1:]:
        same_rank = len(t.shape) == ndim
        if not same_rank or any(
            a != b for i, (a, b) in enumerate(zip(xs[0].shape, t.shape)) if i != axis
        ):
            raise ShapeMismatch(f"concat of {xs[0].shape} and {t.shape} on axis {axis}")

    sizes = [t.shape[axis] for t in xs]
    bounds = np.cumsum(sizes)[:-1]

    def backward(g: np.ndarray) -> Grads:
        return list(np.split(g, bounds, axis=axis))

    data = np.concatenate([t.data.astype(np.float64) for t in xs], axis=axis)

    return result(data, list(xs), backward, "concat")


def maxpool3d(x: Tensor, size: int = 2) -> Tensor:
    """
    Non-overlapping max pooling; gradients go to the first maximal element.
    """

    if x.data.ndim != 5:
        raise ShapeMismatch(f"maxpool3d expects a 5D tensor, got {x.shape}")

    n, c, d, h, w = x.shape
    if d % size or h % size or w % size:
        raise ShapeMismatch(f"spatial dims {x.shape[2:]} not divisible by {size}")

    pooled = (d // size, h // size, w // size)
    blocks = (
        x.data.reshape(n, c, pooled[0], size, pooled[1], size, pooled[2], size)
        .transpose(0, 1, 2, 4, 6, 3, 5, 7)
        .reshape(n, c, *pooled, size**3)
    )
    argmax = blocks.argmax(axis=-1)[..., None]
    out = np.take_along_axis(blocks, argmax, axis=-1)[..., 0]

    def backward(g: np.ndarray) -> Grads:
        routed = np.zeros((n, c, *pooled, size**3))
        np.put_along_axis(routed, argmax, g[..., None], axis=-1)
        grad = (
            routed.reshape(n, c, *pooled, size, size, size)
            .transpose(0, 1, 2, 5, 3, 6, 4, 7)
            .reshape(n, c, d, h, w)
        )
        return [grad]

    return result(out.astype(np.float64), [x], backward, "maxpool3d")


def softmax(x: Tensor, axis: int = 1) -> Tensor:
    logits = x.data.astype(np.float64)
    shifted = np.exp(logits - logits.max(axis=axis, keepdims=True))
    probs = shifted / shifted.sum(axis=axis, keepdims=True)

    def backward(g: np.ndarray) -> Grads:
        return [probs * (g - (g * probs).sum(axis=axis, keepdims=True))]

    return result(probs, [x], backward, "softmax")

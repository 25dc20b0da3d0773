import typing

import numpy as np

from ..error import LabelOutOfRange, ShapeMismatch
from .tensor import Tensor, result


DICE_EPSILON = 1e-5


def weighted_cross_entropy(
    logits: Tensor, target: np.ndarray, weights: typing.Sequence[float]
) -> Tensor:
    """
    Sum of w[t] * -log softmax(logits)[t] over voxels, divided by the sum of
    the applied weights.
    """

    if logits.data.ndim < 2:
        raise ShapeMismatch(f"logits need a class axis, got {logits.shape}")

    classes = logits.shape[1]
    expected = logits.shape[:1] + logits.shape[2:]
    if tuple(target.shape) != expected:
        raise ShapeMismatch(f"target shape {target.shape} != {expected}")

    class_weights = np.asarray(weights, dtype=np.float64)
    if class_weights.shape != (classes,) or np.any(class_weights <= 0):
        raise ShapeMismatch(f"need {classes} positive class weights")

    labels = np.asarray(target).astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise LabelOutOfRange(f"targets must lie in 0..{classes - 1}")

    z = logits.data.astype(np.float64)
    z = z - z.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1, keepdims=True))
    log_probs = z - log_norm

    picked = np.take_along_axis(log_probs, labels[:, None], axis=1)[:, 0]
    voxel_weights = class_weights[labels]
    weight_sum = voxel_weights.sum()

    loss = -(voxel_weights * picked).sum() / weight_sum

    def backward(g: np.ndarray) -> typing.Sequence[typing.Optional[np.ndarray]]:
        probs = np.exp(log_probs)
        np.put_along_axis(
            probs,
            labels[:, None],
            np.take_along_axis(probs, labels[:, None], axis=1) - 1.0,
            axis=1,
        )
        return [probs * (voxel_weights / weight_sum)[:, None] * float(g)]

    return result(np.asarray(loss).reshape(()), [logits], backward, "weighted_ce")


def one_hot(target: np.ndarray, classes: int) -> np.ndarray:
    """
    [N, D, H, W] class indices -> [N, C, D, H, W] indicators.
    """

    labels = np.asarray(target).astype(np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise LabelOutOfRange(f"targets must lie in 0..{classes - 1}")

    return np.moveaxis(np.eye(classes)[labels], -1, 1)


def dice_loss(prob: Tensor, target_onehot: np.ndarray) -> Tensor:
    """
    1 - mean over foreground classes of (2 sum(pt) + eps) / (sum(p) + sum(t) + eps).

    Channel 0 is background and is excluded from the mean.
    """

    if tuple(target_onehot.shape) != prob.shape or prob.data.ndim < 2:
        raise ShapeMismatch(f"prob {prob.shape} vs target {target_onehot.shape}")

    classes = prob.shape[1]
    if classes < 2:
        raise ShapeMismatch("dice loss needs a background and a foreground class")

    p = prob.data.astype(np.float64)
    t = np.asarray(target_onehot, dtype=np.float64)
    axes = tuple(i for i in range(p.ndim) if i != 1)

    intersection = (p * t).sum(axis=axes)
    denominator = p.sum(axis=axes) + t.sum(axis=axes) + DICE_EPSILON
    ratio = (2 * intersection + DICE_EPSILON) / denominator

    foreground = classes - 1
    loss = 1.0 - ratio[1:].mean()

    def backward(g: np.ndarray) -> typing.Sequence[typing.Optional[np.ndarray]]:
        shape = [1] * p.ndim
        shape[1] = classes
        numerator = (2 * intersection + DICE_EPSILON).reshape(shape)
        denom = denominator.reshape(shape)

        grad = -(2 * t * denom - numerator) / denom**2 / foreground
        grad[:, 0] = 0.0
        return [grad * float(g)]

    return result(np.asarray(loss).reshape(()), [prob], backward, "dice")

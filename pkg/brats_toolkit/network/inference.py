import typing

import numpy as np

from ..autodiff import Tensor, softmax
from ..config import CLASS_TO_LABEL
from ..models.patches import PatchSpec
from ..patches import inference_patches, pad_to_patch, stack_modalities, stitch
from ..volume import Subject
from .dense_fcn import NetworkState, forward


def predict_probabilities(
    state: NetworkState,
    subject: Subject,
    spec: PatchSpec,
    inputs: typing.Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Whole-volume class probabilities [C, X, Y, Z] from overlapping patches.
    """

    if inputs is None:
        inputs = stack_modalities(subject)

    dims = inputs.shape[1:]
    padded = pad_to_patch(inputs, spec.size)

    # parameters are read without recording a graph
    frozen = NetworkState(
        spec=state.spec,
        params={name: t.detach() for name, t in state.params.items()},
    )

    patches = list(inference_patches(padded, spec))
    outputs: typing.List[typing.Tuple[typing.Tuple[int, int, int], np.ndarray]] = []
    for start in range(0, len(patches), spec.infer_batch_size):
        chunk = patches[start : start + spec.infer_batch_size]
        batch = Tensor(np.stack([patch for _, patch in chunk]))
        probs = softmax(forward(frozen, batch), axis=1).data
        outputs.extend((corner, p) for (corner, _), p in zip(chunk, probs))

    stitched = stitch(outputs, padded.shape[1:])

    return stitched[:, : dims[0], : dims[1], : dims[2]]


def probabilities_to_labels(probs: np.ndarray) -> np.ndarray:
    """
    Argmax over classes mapped back to BraTS labels {0, 1, 2, 4}.
    """

    lookup = np.array(CLASS_TO_LABEL, dtype=np.uint8)

    return lookup[np.argmax(probs, axis=0)]

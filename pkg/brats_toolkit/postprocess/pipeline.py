import typing

import numpy as np

from ..models.postprocess import ComponentFilterConfig, CrfConfig
from ..network import probabilities_to_labels
from ..volume import Volume
from .components import filter_small_components
from .crf import crf_mean_field


def postprocess_probabilities(
    probs: np.ndarray,
    spacing: typing.Tuple[float, float, float],
    crf: CrfConfig,
    components: ComponentFilterConfig,
) -> Volume:
    """
    CRF smoothing, argmax to BraTS labels, then small component removal.
    """

    smoothed = crf_mean_field(probs, crf)
    labels = Volume.label(probabilities_to_labels(smoothed), spacing)

    return filter_small_components(labels, components)

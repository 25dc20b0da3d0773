from .components import ComponentLabels, connected_components, filter_small_components
from .crf import crf_mean_field, neighborhood_kernel
from .pipeline import postprocess_probabilities

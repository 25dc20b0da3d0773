from .checkpoint import load_state, save_state
from .dense_fcn import (
    NetworkState,
    build,
    count_layers,
    enumerate_layers,
    forward,
    parameter_count,
)
from .inference import predict_probabilities, probabilities_to_labels

import typing

import numpy as np
import pytest

from brats_toolkit.clinical import ClinicalRecord
from brats_toolkit.models.network import NetworkSpec
from brats_toolkit.models.phantom import PhantomSpec
from brats_toolkit.phantom import generate_subject
from brats_toolkit.volume import Subject


@pytest.fixture
def tiny_network() -> NetworkSpec:
    return NetworkSpec(
        growth_rate=2,
        layers_per_dense_block=[2, 1],
        num_transition_downs=1,
        initial_conv_channels=4,
    )


@pytest.fixture
def phantom_spec() -> PhantomSpec:
    return PhantomSpec(
        dims=(16, 16, 16),
        wt_radius=(4.0, 5.0),
        tc_ratio=(0.6, 0.7),
        et_ratio=(0.6, 0.7),
        seed=3,
    )


@pytest.fixture
def phantom_subject(phantom_spec: PhantomSpec) -> Subject:
    subject, _ = generate_subject(
        phantom_spec, "phantom_000", np.random.default_rng(0)
    )
    return subject


@pytest.fixture
def phantom_pair(
    phantom_spec: PhantomSpec,
) -> typing.Tuple[Subject, ClinicalRecord]:
    return generate_subject(phantom_spec, "phantom_001", np.random.default_rng(1))

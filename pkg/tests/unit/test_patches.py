import itertools

import numpy as np
import pytest

from brats_toolkit.error import CoverageGap, NoForeground, ShapeMismatch
from brats_toolkit.models.patches import PatchSpec
from brats_toolkit.patches import (
    grid_corners,
    inference_patches,
    label_classes,
    pad_to_patch,
    sample_training_patches,
    stack_modalities,
    stitch,
)
from brats_toolkit.volume import Subject, Volume


def test_grid_corners() -> None:
    corners = grid_corners((16, 16, 16), 8, 4)

    assert len(corners) == 27
    assert corners[0] == (0, 0, 0)
    assert corners[-1] == (8, 8, 8)


def test_grid_corners_clamped() -> None:
    corners = grid_corners((10, 8, 8), 8, 4)

    assert corners == [(0, 0, 0), (2, 0, 0)]


def test_grid_corners_errors() -> None:
    with pytest.raises(ShapeMismatch):
        grid_corners((6, 8, 8), 8, 4)

    with pytest.raises(ShapeMismatch):
        grid_corners((8, 8, 8), 8, 9)


def test_stitch_constant() -> None:
    dims = (12, 10, 8)
    patches = [
        (corner, np.full((4, 4, 4, 4), 0.25))
        for corner in grid_corners(dims, 4, 2)
    ]

    assert np.allclose(stitch(patches, dims), 0.25)


def test_stitch_tiling() -> None:
    rng = np.random.default_rng(0)
    full = rng.uniform(size=(2, 8, 8, 8))
    patches = [
        ((x, y, z), full[:, x : x + 4, y : y + 4, z : z + 4])
        for x, y, z in grid_corners((8, 8, 8), 4, 4)
    ]

    assert np.array_equal(stitch(patches, (8, 8, 8)), full)


def test_stitch_mean() -> None:
    rng = np.random.default_rng(1)
    dims = (7, 6, 6)
    corners = grid_corners(dims, 4, 3)
    patches = [(corner, rng.uniform(size=(3, 4, 4, 4))) for corner in corners]

    stitched = stitch(patches, dims)

    for position in itertools.product(*(range(d) for d in dims)):
        values = [
            probs[(slice(None), *(p - c for p, c in zip(position, corner)))]
            for corner, probs in patches
            if all(c <= p < c + 4 for p, c in zip(position, corner))
        ]
        expected = np.mean(values, axis=0)

        assert np.allclose(stitched[(slice(None), *position)], expected)


def test_stitch_coverage_gap() -> None:
    patches = [((0, 0, 0), np.ones((2, 4, 4, 4)))]

    with pytest.raises(CoverageGap):
        stitch(patches, (8, 4, 4))

    with pytest.raises(CoverageGap):
        stitch([], (4, 4, 4))


def test_stitch_out_of_bounds() -> None:
    with pytest.raises(ShapeMismatch):
        stitch([((2, 0, 0), np.ones((2, 4, 4, 4)))], (4, 4, 4))


def test_pad_to_patch() -> None:
    padded = pad_to_patch(np.ones((4, 5, 8, 9)), 8)

    assert padded.shape == (4, 8, 8, 9)
    assert padded[:, 5:].sum() == 0


def test_label_classes() -> None:
    labels = np.array([0, 1, 2, 4, 3])

    assert label_classes(labels).tolist() == [0, 1, 2, 3, 255]


def test_stack_modalities(phantom_subject: Subject) -> None:
    inputs = stack_modalities(phantom_subject)
    brain = phantom_subject.brain_mask.data

    assert inputs.shape == (4, 16, 16, 16)
    assert inputs.dtype == np.float32
    assert np.allclose(inputs[:, brain].mean(axis=1), 0.0, atol=1e-5)
    assert np.all(inputs[:, ~brain] == 0)


def test_inference_patches_cover(phantom_subject: Subject) -> None:
    spec = PatchSpec(size=8, infer_stride=4)
    inputs = stack_modalities(phantom_subject)

    patches = list(inference_patches(inputs, spec))

    assert len(patches) == 27
    assert all(patch.shape == (4, 8, 8, 8) for _, patch in patches)


def test_balanced_sampling(phantom_subject: Subject) -> None:
    spec = PatchSpec(size=8, infer_stride=4)
    rng = np.random.default_rng(2)

    batch = sample_training_patches(phantom_subject, spec, 400, rng)

    assert batch.inputs.shape == (400, 4, 8, 8, 8)
    assert batch.targets.shape == (400, 8, 8, 8)
    assert len(batch.provenance) == 400

    counts = np.bincount(batch.center_classes, minlength=4)
    assert np.all(np.abs(counts - 100) < 40)

    for targets, center in zip(batch.targets, batch.center_classes):
        assert np.any(targets == center)


def test_sampling_small_volume(phantom_subject: Subject) -> None:
    spec = PatchSpec(size=20, infer_stride=10)

    batch = sample_training_patches(
        phantom_subject, spec, 3, np.random.default_rng(0)
    )

    assert batch.inputs.shape == (3, 4, 20, 20, 20)
    assert np.all(batch.inputs.data[:, :, 16:] == 0)


def test_sampling_grid(phantom_subject: Subject) -> None:
    spec = PatchSpec(size=8, train_sampling="grid", infer_stride=8)

    batch = sample_training_patches(
        phantom_subject, spec, 5, np.random.default_rng(0)
    )

    for _, corner in batch.provenance:
        assert all(c % 8 == 0 for c in corner)


def test_sampling_background_only(phantom_subject: Subject) -> None:
    subject = Subject(
        id="empty",
        modalities=phantom_subject.modalities,
        ground_truth=Volume.label(np.zeros(phantom_subject.dims)),
    )

    batch = sample_training_patches(
        subject, PatchSpec(size=8, infer_stride=4), 10, np.random.default_rng(0)
    )

    assert np.all(batch.center_classes == 0)
    assert np.all(batch.targets == 0)


def test_sampling_without_labels(phantom_subject: Subject) -> None:
    subject = Subject(id="unlabeled", modalities=phantom_subject.modalities)

    with pytest.raises(NoForeground):
        sample_training_patches(
            subject, PatchSpec(size=8, infer_stride=4), 1, np.random.default_rng(0)
        )


def test_sampling_reproducible(phantom_subject: Subject) -> None:
    spec = PatchSpec(size=8, infer_stride=4)

    a = sample_training_patches(phantom_subject, spec, 6, np.random.default_rng(9))
    b = sample_training_patches(phantom_subject, spec, 6, np.random.default_rng(9))

    assert a.provenance == b.provenance
    assert np.array_equal(a.inputs.data, b.inputs.data)

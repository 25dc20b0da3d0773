import os.path
import tempfile

import numpy as np
import pytest

from brats_toolkit.clinical import read_clinical
from brats_toolkit.error import InvalidGeometry
from brats_toolkit.metrics import Region, region_masks
from brats_toolkit.models.paths import PathsConfig
from brats_toolkit.models.phantom import PhantomSpec
from brats_toolkit.phantom import (
    generate_cohort,
    generate_labels,
    generate_subject,
    subject_ids,
    write_cohort,
)
from brats_toolkit.volume import Modality
from brats_toolkit.volume.layout import list_subjects, load_subject


def test_nested_regions(phantom_spec: PhantomSpec) -> None:
    for seed in range(5):
        labels, brain = generate_labels(phantom_spec, np.random.default_rng(seed))
        masks = {m.region: m.mask for m in region_masks(labels)}

        assert not np.any(masks[Region.ET] & ~masks[Region.TC])
        assert not np.any(masks[Region.TC] & ~masks[Region.WT])
        assert not np.any(masks[Region.WT] & ~brain)
        assert masks[Region.ET].any()


def test_subject_intensities(phantom_spec: PhantomSpec) -> None:
    quiet = phantom_spec.model_copy(update={"noise_std": 0.0})

    subject, record = generate_subject(quiet, "a", np.random.default_rng(0))
    assert subject.ground_truth is not None
    labels = subject.ground_truth.data
    t1ce = subject.modalities[Modality.T1Gd].data

    assert np.all(t1ce[labels == 4] == 230.0)
    assert np.all(t1ce[labels == 2] == 95.0)
    assert record.survival_days is not None and record.survival_days >= 1.0
    assert 30.0 <= record.age <= 80.0
    assert record.resection_status in ("GTR", "STR", "NA")


def test_brain_mask_recovered(phantom_spec: PhantomSpec) -> None:
    rng = np.random.default_rng(1)
    labels, brain = generate_labels(phantom_spec, np.random.default_rng(1))
    subject, _ = generate_subject(phantom_spec, "a", rng)

    assert np.array_equal(subject.brain_mask.data, brain)


def test_survival_follows_burden() -> None:
    spec = PhantomSpec(
        dims=(24, 24, 24), wt_radius=(2.0, 8.0), survival_noise=0.0, seed=0
    )

    cohort = generate_cohort(spec, 12)
    burden = [
        float(np.count_nonzero(s.ground_truth.data)) if s.ground_truth else 0.0
        for s in cohort.subjects
    ]
    days = [r.survival_days for r in cohort.clinical]

    order = np.argsort(burden)
    assert all(
        days[a] is not None and days[b] is not None and days[a] >= days[b]
        for a, b in zip(order, order[1:])
    )


def test_cohort_deterministic(phantom_spec: PhantomSpec) -> None:
    a = generate_cohort(phantom_spec, 4, threads=1)
    b = generate_cohort(phantom_spec, 4, threads=3)

    assert a.clinical == b.clinical
    assert a.hard == b.hard
    for x, y in zip(a.subjects, b.subjects):
        for modality in Modality:
            assert np.array_equal(
                x.modalities[modality].data, y.modalities[modality].data
            )


def test_hard_fraction(phantom_spec: PhantomSpec) -> None:
    spec = phantom_spec.model_copy(update={"hard_fraction": 0.5})

    cohort = generate_cohort(spec, 6)

    assert len(cohort.hard) == 3
    assert cohort.hard <= set(subject_ids(6))


def test_frequencies(phantom_spec: PhantomSpec) -> None:
    frequencies = generate_cohort(phantom_spec, 2).frequencies()

    assert frequencies.sum() == pytest.approx(1.0)
    assert np.all(frequencies > 0)
    assert frequencies[0] == frequencies.max()


def test_invalid_geometry() -> None:
    with pytest.raises(InvalidGeometry):
        generate_cohort(PhantomSpec(dims=(16, 16, 16), wt_radius=(4.0, 8.0)), 1)

    with pytest.raises(InvalidGeometry):
        generate_cohort(PhantomSpec(dims=(32, 32, 32), wt_radius=(2.0, 4.0)), 0)


def test_subject_ids() -> None:
    assert subject_ids(3) == ["phantom_000", "phantom_001", "phantom_002"]
    assert subject_ids(1001)[-1] == "phantom_1000"


def test_write_cohort(phantom_spec: PhantomSpec) -> None:
    cohort = generate_cohort(phantom_spec, 2)
    paths = PathsConfig()

    with tempfile.TemporaryDirectory() as temp_dir:
        write_cohort(cohort, temp_dir, paths)

        assert list_subjects(temp_dir) == ["phantom_000", "phantom_001"]
        loaded = load_subject(temp_dir, "phantom_001", paths)
        clinical = read_clinical(os.path.join(temp_dir, "clinical.csv"))

    original = cohort.subjects[1]
    assert loaded.ground_truth is not None and original.ground_truth is not None
    assert np.array_equal(loaded.ground_truth.data, original.ground_truth.data)
    assert np.array_equal(
        loaded.modalities[Modality.FLAIR].data, original.modalities[Modality.FLAIR].data
    )
    assert clinical["phantom_001"] == cohort.clinical[1]

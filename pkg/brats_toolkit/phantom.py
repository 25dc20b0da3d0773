"""
Synthetic subjects: an ellipsoid brain holding three nested ellipsoids
(whole tumor ⊃ tumor core ⊃ enhancing tumor) sharing one center. Radii are
in voxels.

Survival is ``intercept - slope * (WT voxels / brain voxels) + noise``,
clipped to at least one day.
"""

import concurrent.futures
import dataclasses
import logging
import math
import os
import typing

import numpy as np

from .clinical import RESECTION_STATUSES, ClinicalRecord, write_clinical
from .config import CLASS_TO_LABEL, NUM_CLASSES
from .error import InvalidGeometry
from .models.paths import PathsConfig
from .models.phantom import PhantomSpec
from .training.weights import class_frequencies
from .volume import Modality, Subject, Volume
from .volume.layout import save_subject


logger = logging.getLogger(__name__)

AGE_RANGE = (30.0, 80.0)
RESECTION_PROBABILITIES = (0.5, 0.3, 0.2)


@dataclasses.dataclass(frozen=True)
class PhantomCohort:
    subjects: typing.List[Subject]
    clinical: typing.List[ClinicalRecord]
    hard: typing.FrozenSet[str]

    def frequencies(self) -> np.ndarray:
        return class_frequencies(
            s.ground_truth for s in self.subjects if s.ground_truth is not None
        )


def _brain_radii(spec: PhantomSpec) -> np.ndarray:
    return spec.brain_fill * np.array(spec.dims, dtype=np.float64) / 2


def _check_geometry(spec: PhantomSpec) -> None:
    if spec.wt_radius[1] >= float(_brain_radii(spec).min()):
        raise InvalidGeometry(
            f"whole tumor radius {spec.wt_radius[1]} does not fit in brain "
            f"radii {_brain_radii(spec).tolist()}"
        )

    for name in spec.profiles:
        if name not in {m.value for m in Modality}:
            raise InvalidGeometry(f"profile for unknown modality {name!r}")

    missing = {m.value for m in Modality} - set(spec.profiles)
    if missing:
        raise InvalidGeometry(f"missing intensity profiles {sorted(missing)}")


def ellipsoid(
    dims: typing.Tuple[int, int, int], center: np.ndarray, radii: np.ndarray
) -> np.ndarray:
    grid = np.indices(dims, dtype=np.float64)
    distance = sum(
        ((grid[axis] - center[axis]) / radii[axis]) ** 2 for axis in range(3)
    )

    return np.asarray(distance <= 1.0)


def generate_labels(
    spec: PhantomSpec, rng: np.random.Generator
) -> typing.Tuple[np.ndarray, np.ndarray]:
    """
    (BraTS label array, brain mask).
    """

    brain_center = (np.array(spec.dims, dtype=np.float64) - 1) / 2
    brain_radii = _brain_radii(spec)
    brain = ellipsoid(spec.dims, brain_center, brain_radii)

    wt_radii = rng.uniform(*spec.wt_radius, size=3)
    tc_radii = wt_radii * rng.uniform(*spec.tc_ratio)
    et_radii = tc_radii * rng.uniform(*spec.et_ratio)

    # offset keeps the whole tumor inside the brain ellipsoid
    slack = 1.0 - float(np.max(wt_radii / brain_radii))
    direction = rng.normal(size=3)
    direction /= max(float(np.linalg.norm(direction)), 1e-12)
    reach = 0.9 * slack * rng.uniform() ** (1 / 3)
    center = brain_center + direction * reach * brain_radii

    wt = ellipsoid(spec.dims, center, wt_radii) & brain
    tc = ellipsoid(spec.dims, center, tc_radii) & wt
    et = ellipsoid(spec.dims, center, et_radii) & tc

    labels = np.zeros(spec.dims, dtype=np.uint8)
    labels[wt] = CLASS_TO_LABEL[2]
    labels[tc] = CLASS_TO_LABEL[1]
    labels[et] = CLASS_TO_LABEL[3]

    return labels, brain


def generate_subject(
    spec: PhantomSpec,
    subject_id: str,
    rng: np.random.Generator,
    hard: bool = False,
) -> typing.Tuple[Subject, ClinicalRecord]:
    _check_geometry(spec)

    labels, brain = generate_labels(spec, rng)
    noise = spec.noise_std * (spec.hard_noise_multiplier if hard else 1.0)

    modalities = {}
    for modality in Modality:
        profile = spec.profiles[modality.value]
        means = np.array(
            [profile.brain, profile.necrosis, profile.edema, profile.enhancing]
        )
        lookup = np.zeros(max(CLASS_TO_LABEL) + 1, dtype=np.int64)
        lookup[list(CLASS_TO_LABEL)] = np.arange(NUM_CLASSES)

        image = means[lookup[labels]] + rng.normal(0.0, noise, size=spec.dims)
        # brain voxels must stay nonzero to keep the brain mask intact
        image = np.where(brain, np.maximum(image, 1.0), 0.0)
        modalities[modality] = Volume.intensity(image, spec.spacing)

    wt_fraction = float(np.count_nonzero(labels)) / float(np.count_nonzero(brain))
    days = (
        spec.survival_intercept
        - spec.survival_slope * wt_fraction
        + rng.normal(0.0, spec.survival_noise)
    )
    grade = "HGG" if rng.uniform() < spec.hgg_fraction else "LGG"

    record = ClinicalRecord(
        subject_id=subject_id,
        age=round(float(rng.uniform(*AGE_RANGE)), 2),
        survival_days=round(max(1.0, days), 2),
        resection_status=str(rng.choice(RESECTION_STATUSES, p=RESECTION_PROBABILITIES)),
        grade=grade,
    )
    subject = Subject(
        id=subject_id,
        modalities=modalities,
        ground_truth=Volume.label(labels, spec.spacing),
        grade=grade,
    )

    return subject, record


def subject_ids(n: int) -> typing.List[str]:
    width = max(3, len(str(n - 1)))
    return [f"phantom_{i:0{width}d}" for i in range(n)]


def generate_cohort(spec: PhantomSpec, n: int, threads: int = 1) -> PhantomCohort:
    """
    ``n`` subjects, each from its own stream of ``spec.seed``, so the cohort
    does not depend on ``threads``.
    """

    if n < 1:
        raise InvalidGeometry(f"cannot generate {n} subjects")

    _check_geometry(spec)

    sequence = np.random.SeedSequence(spec.seed)
    cohort_stream, *streams = sequence.spawn(n + 1)

    ids = subject_ids(n)
    hard_count = math.floor(spec.hard_fraction * n + 0.5)
    order = np.random.default_rng(cohort_stream).permutation(n)
    hard = frozenset(ids[i] for i in order[:hard_count])

    def build(index: int) -> typing.Tuple[Subject, ClinicalRecord]:
        rng = np.random.default_rng(streams[index])
        return generate_subject(spec, ids[index], rng, hard=ids[index] in hard)

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        generated = list(pool.map(build, range(n)))

    cohort = PhantomCohort(
        subjects=[s for s, _ in generated],
        clinical=[r for _, r in generated],
        hard=hard,
    )
    logger.info(
        "Generated %d phantom subjects, class frequencies %s",
        n,
        np.round(cohort.frequencies(), 4).tolist(),
    )

    return cohort


def generate(spec: PhantomSpec, n: int) -> typing.List[Subject]:
    return generate_cohort(spec, n).subjects


def write_cohort(cohort: PhantomCohort, root: str, paths: PathsConfig) -> None:
    """
    NIfTI files under ``<root>/<id>/`` and the clinical CSV at the top.
    """

    os.makedirs(root, exist_ok=True)
    for subject in cohort.subjects:
        save_subject(root, subject, paths)

    write_clinical(os.path.join(root, paths.clinical_file), cohort.clinical)

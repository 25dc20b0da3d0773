import concurrent.futures
import dataclasses
import logging
import math
import typing

import numpy as np
import pandas as pd

from ..clinical import RESECTION_STATUSES, ClinicalRecord
from ..config import MISSING_VALUE
from ..error import EmptyRegion, MissingModality, RadiomicsError
from ..metrics import region_masks
from ..models.radiomics import RadiomicsConfig
from ..volume import Modality, Subject, Volume
from .firstorder import FIRST_ORDER_FEATURES, first_order
from .glcm import GLCM_FEATURES, glcm
from .gldm import GLDM_FEATURES, gldm
from .glrlm import GLRLM_FEATURES, glrlm
from .glszm import GLSZM_FEATURES, glszm
from .ngtdm import NGTDM_FEATURES, ngtdm
from .quantize import QuantizedRegion, quantize
from .shape import SHAPE_FEATURES, shape_features


logger = logging.getLogger(__name__)


FAMILY_FEATURES: typing.Dict[str, typing.List[str]] = {
    "firstorder": FIRST_ORDER_FEATURES,
    "glcm": GLCM_FEATURES,
    "glrlm": GLRLM_FEATURES,
    "gldm": GLDM_FEATURES,
    "glszm": GLSZM_FEATURES,
    "ngtdm": NGTDM_FEATURES,
}

TEXTURE_FUNCTIONS: typing.Dict[
    str,
    typing.Callable[
        [QuantizedRegion], typing.Tuple[np.ndarray, typing.Dict[str, float]]
    ],
] = {
    "glcm": glcm,
    "glrlm": glrlm,
    "gldm": gldm,
    "glszm": glszm,
    "ngtdm": ngtdm,
}


@dataclasses.dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    family: str
    region: typing.Optional[str] = dataclasses.field(default=None)
    modality: typing.Optional[str] = dataclasses.field(default=None)


def feature_descriptors(config: RadiomicsConfig) -> typing.List[FeatureDescriptor]:
    """
    Ordered columns: region x modality x family features, then region shape
    features, then clinical columns.
    """

    descriptors = []
    for region in config.regions:
        for modality in config.modalities:
            for family in config.families:
                for feature in FAMILY_FEATURES[family]:
                    descriptors.append(
                        FeatureDescriptor(
                            name=f"{region}_{modality}_{family}_{feature}",
                            family=family,
                            region=region,
                            modality=modality,
                        )
                    )

    if config.shape:
        for region in config.regions:
            for feature in SHAPE_FEATURES:
                descriptors.append(
                    FeatureDescriptor(
                        name=f"{region}_shape_{feature}", family="shape", region=region
                    )
                )

    if config.clinical:
        descriptors.append(FeatureDescriptor(name="age", family="clinical"))
        for status in RESECTION_STATUSES:
            descriptors.append(
                FeatureDescriptor(name=f"resection_{status}", family="clinical")
            )

    return descriptors


def feature_names(config: RadiomicsConfig) -> typing.List[str]:
    return [descriptor.name for descriptor in feature_descriptors(config)]


@dataclasses.dataclass(eq=False)
class FeatureMatrix:
    """
    Rows are subjects (index ``subject_id``), columns are named features.
    NaN marks a missing value.
    """

    frame: pd.DataFrame

    @property
    def columns(self) -> typing.List[str]:
        return [str(c) for c in self.frame.columns]

    @property
    def subject_ids(self) -> typing.List[str]:
        return [str(i) for i in self.frame.index]

    @property
    def values(self) -> np.ndarray:
        return self.frame.to_numpy(dtype=np.float64)

    def select(self, columns: typing.Sequence[str]) -> "FeatureMatrix":
        return FeatureMatrix(frame=self.frame.loc[:, list(columns)])

    def rows(self, subject_ids: typing.Sequence[str]) -> "FeatureMatrix":
        return FeatureMatrix(frame=self.frame.loc[list(subject_ids)])

    def write_csv(self, path: str) -> None:
        self.frame.to_csv(path, na_rep=MISSING_VALUE, float_format="%.17g")

    @classmethod
    def read_csv(cls, path: str) -> "FeatureMatrix":
        frame = pd.read_csv(
            path,
            index_col="subject_id",
            dtype={"subject_id": str},
            na_values=[MISSING_VALUE],
            keep_default_na=False,
            float_precision="round_trip",
        )

        return cls(frame=frame.astype(np.float64))


def region_features(
    image: np.ndarray,
    mask: np.ndarray,
    spacing: typing.Tuple[float, float, float],
    families: typing.Sequence[str],
    bin_count: int,
) -> typing.Dict[str, float]:
    """
    Family-prefixed features of one (modality, region) pair. Families that
    cannot be computed on the region (e.g. co-occurrence of a single voxel)
    come back as NaN.
    """

    values: typing.Dict[str, float] = {}
    region = quantize(image, mask, bin_count, spacing)
    for family in families:
        try:
            if family == "firstorder":
                features = first_order(
                    image[mask], bin_count, voxel_volume=float(np.prod(spacing))
                )
            else:
                _, features = TEXTURE_FUNCTIONS[family](region)
        except EmptyRegion:
            features = dict.fromkeys(FAMILY_FEATURES[family], math.nan)

        for name in FAMILY_FEATURES[family]:
            values[f"{family}_{name}"] = features[name]

    return values


def extract_subject(
    subject: Subject,
    segmentation: Volume,
    config: RadiomicsConfig,
    clinical: typing.Optional[ClinicalRecord] = None,
) -> typing.Dict[str, float]:
    for modality in config.modalities:
        if Modality(modality) not in subject.modalities:
            raise MissingModality(f"subject {subject.id} lacks {modality}")

    if segmentation.dims != subject.dims:
        raise RadiomicsError(
            f"segmentation {segmentation.dims} does not match subject {subject.dims}"
        )

    masks = {m.region.value: m.mask for m in region_masks(segmentation)}
    row: typing.Dict[str, float] = dict.fromkeys(feature_names(config), math.nan)
    for region in config.regions:
        mask = masks[region]
        if not mask.any():
            logger.debug("Subject %s has an empty %s region", subject.id, region)
            continue

        for modality in config.modalities:
            image = subject.modalities[Modality(modality)].data
            values = region_features(
                image, mask, subject.spacing, config.families, config.bin_count
            )
            for name, value in values.items():
                row[f"{region}_{modality}_{name}"] = value

        if config.shape:
            for name, value in shape_features(mask, subject.spacing).items():
                row[f"{region}_shape_{name}"] = value

    if config.clinical and clinical is not None:
        row["age"] = clinical.age
        for status in RESECTION_STATUSES:
            row[f"resection_{status}"] = float(clinical.resection_status == status)

    return row


def extract_matrix(
    subjects: typing.Sequence[Subject],
    config: RadiomicsConfig,
    segmentations: typing.Optional[typing.Mapping[str, Volume]] = None,
    clinical: typing.Optional[typing.Mapping[str, ClinicalRecord]] = None,
    threads: int = 1,
) -> FeatureMatrix:
    """
    Feature matrix over subjects, segmented either by their ground truth or
    by the given predicted label volumes.
    """

    def segmentation_of(subject: Subject) -> Volume:
        if config.segmentation == "predicted":
            if segmentations is None or subject.id not in segmentations:
                raise RadiomicsError(f"no predicted segmentation for {subject.id}")
            return segmentations[subject.id]

        if subject.ground_truth is None:
            raise RadiomicsError(f"subject {subject.id} has no ground truth")
        return subject.ground_truth

    def work(subject: Subject) -> typing.Dict[str, float]:
        record = clinical.get(subject.id) if clinical is not None else None
        return extract_subject(subject, segmentation_of(subject), config, record)

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(work, subjects))

    names = feature_names(config)
    frame = pd.DataFrame(rows, columns=names, index=[s.id for s in subjects])
    frame.index.name = "subject_id"
    logger.info("Extracted %d features for %d subjects", len(names), len(subjects))

    return FeatureMatrix(frame=frame.astype(np.float64))

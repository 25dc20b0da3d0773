import os.path
import tempfile
import typing

import numpy as np
import pandas as pd
import pytest

from brats_toolkit.clinical import ClinicalRecord
from brats_toolkit.error import EmptyRegion, MissingModality
from brats_toolkit.models.radiomics import RadiomicsConfig
from brats_toolkit.postprocess import connected_components
from brats_toolkit.radiomics import (
    FAMILY_FEATURES,
    SHAPE_FEATURES,
    FeatureMatrix,
    QuantizedRegion,
    cooccurrence,
    dependence,
    discretize,
    extract_matrix,
    feature_names,
    first_order,
    glcm,
    gldm,
    glrlm,
    glszm,
    gray_tone_differences,
    ngtdm,
    quantize,
    region_features,
    run_lengths,
    shape_features,
    size_zones,
)
from brats_toolkit.volume import Modality, Subject, Volume


def region(levels: np.ndarray, bin_count: int) -> QuantizedRegion:
    return QuantizedRegion(
        levels=np.asarray(levels, dtype=np.int64),
        spacing=(1.0, 1.0, 1.0),
        bin_count=bin_count,
    )


def test_family_sizes() -> None:
    sizes = {family: len(names) for family, names in FAMILY_FEATURES.items()}

    assert sizes["firstorder"] == 19
    assert sum(sizes.values()) - sizes["firstorder"] == 75
    assert len(SHAPE_FEATURES) == 26


def test_default_column_count() -> None:
    names = feature_names(RadiomicsConfig())

    assert len(names) == 3 * 4 * 94 + 3 * 26 + 4
    assert len(set(names)) == len(names)
    assert "wt_flair_glcm_Contrast" in names
    assert "et_shape_Sphericity" in names


def test_discretize() -> None:
    assert discretize(np.array([0.0, 0.5, 1.0]), 2).tolist() == [1, 2, 2]
    assert discretize(np.full(3, 7.0), 32).tolist() == [1, 1, 1]

    with pytest.raises(EmptyRegion):
        discretize(np.array([]), 4)


def test_first_order_constant() -> None:
    features = first_order(np.full(10, 5.0))

    assert features["Mean"] == features["Median"] == 5.0
    assert features["Variance"] == 0.0
    assert features["Entropy"] == pytest.approx(0.0, abs=1e-9)


def test_first_order_two_levels() -> None:
    features = first_order(np.array([0.0, 0.0, 1.0, 1.0]))

    assert features["Uniformity"] == pytest.approx(0.5)
    assert features["Entropy"] == pytest.approx(1.0, abs=1e-9)


def test_first_order_symmetric() -> None:
    features = first_order(np.array([1.0, 2.0, 3.0, 4.0, 5.0]))

    assert features["Skewness"] == pytest.approx(0.0, abs=1e-9)


def test_first_order_oracle() -> None:
    values = np.random.default_rng(0).normal(10.0, 3.0, size=500)
    features = first_order(values)

    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)

    assert features["Mean"] == pytest.approx(mean, abs=1e-10)
    assert features["Variance"] == pytest.approx(variance, abs=1e-10)


def test_first_order_empty() -> None:
    with pytest.raises(EmptyRegion):
        first_order(np.array([]))


def test_cooccurrence_pairs() -> None:
    levels = np.array([[1, 1], [1, 2]]).reshape(2, 2, 1)

    counts = cooccurrence(region(levels, 2), (0, 1, 0), symmetric=False)

    assert counts.tolist() == [[1.0, 1.0], [0.0, 0.0]]


def test_glcm_constant() -> None:
    matrix, features = glcm(region(np.ones((3, 3, 3)), 4))

    assert np.count_nonzero(matrix) == 1
    assert features["Contrast"] == 0.0


def test_glcm_symmetric() -> None:
    levels = np.random.default_rng(1).integers(1, 5, size=(5, 5, 5))

    matrix, _ = glcm(region(levels, 4))

    assert np.allclose(matrix, matrix.T)
    assert matrix.sum() == pytest.approx(1.0)
    assert np.all((matrix >= 0) & (matrix <= 1))


def test_glcm_single_voxel() -> None:
    with pytest.raises(EmptyRegion):
        glcm(region(np.ones((1, 1, 1)), 4))


def test_run_lengths() -> None:
    levels = np.array([1, 1, 2]).reshape(3, 1, 1)

    matrix = run_lengths(region(levels, 2), (1, 0, 0))

    assert matrix[0, 1] == 1.0
    assert matrix[1, 0] == 1.0
    assert matrix.sum() == 2.0


def test_glrlm_features_finite() -> None:
    levels = np.random.default_rng(2).integers(1, 4, size=(4, 4, 4))

    _, features = glrlm(region(levels, 3))

    assert all(np.isfinite(value) for value in features.values())


def test_dependence_cube() -> None:
    matrix = dependence(region(np.ones((3, 3, 3)), 2))

    assert matrix[0, 26] == 1.0
    assert matrix[0, 7] == 8.0
    assert matrix.sum() == 27.0
    assert matrix[1].sum() == 0.0


def test_gldm_single_voxel() -> None:
    matrix, features = gldm(region(np.ones((1, 1, 1)), 4))

    assert matrix[0, 0] == 1.0
    assert features["SmallDependenceEmphasis"] == 1.0
    assert features["DependenceEntropy"] == pytest.approx(0.0, abs=1e-12)


def test_glszm_constant_cube() -> None:
    matrix, features = glszm(region(np.ones((3, 3, 3)), 4))

    assert matrix[0, 26] == 1.0
    assert matrix.sum() == 1.0
    assert features["ZonePercentage"] == pytest.approx(1 / 27)


def test_glszm_matches_components() -> None:
    levels = np.random.default_rng(3).integers(0, 4, size=(8, 8, 8))

    matrix = size_zones(region(levels, 3))

    for level in range(1, 4):
        components = connected_components(levels == level, connectivity=26)
        sizes = np.repeat(
            np.arange(1, matrix.shape[1] + 1), matrix[level - 1].astype(int)
        )
        assert sorted(sizes.tolist()) == sorted(components.sizes)


def test_ngtdm_constant() -> None:
    counts, differences = gray_tone_differences(region(np.ones((3, 3, 3)), 4))

    assert counts[0] == 27
    assert np.all(differences == 0)

    _, features = ngtdm(region(np.ones((3, 3, 3)), 4))
    assert features["Contrast"] == 0.0


def test_shape_single_voxel() -> None:
    features = shape_features(np.ones((1, 1, 1), dtype=bool))

    assert features["Volume"] == 1.0
    assert features["SurfaceArea"] == 6.0
    assert features["Elongation"] == 1.0


def test_shape_cube() -> None:
    mask = np.zeros((4, 4, 4), dtype=bool)
    mask[1:3, 1:3, 1:3] = True

    features = shape_features(mask)

    assert features["Volume"] == 8.0
    assert features["SurfaceArea"] == 24.0
    assert features["Sphericity"] == pytest.approx(0.806, abs=1e-3)
    assert features["Maximum3DDiameter"] == pytest.approx(np.sqrt(3))
    assert features["PixelSurface"] == 4.0
    assert features["Perimeter"] == 8.0


def test_shape_spacing() -> None:
    features = shape_features(np.ones((1, 1, 1), dtype=bool), (2.0, 1.0, 1.0))

    assert features["Volume"] == 2.0
    assert features["SurfaceArea"] == 10.0


def test_shape_empty() -> None:
    with pytest.raises(EmptyRegion):
        shape_features(np.zeros((2, 2, 2), dtype=bool))


def test_translation_invariance() -> None:
    rng = np.random.default_rng(4)
    image = rng.normal(100.0, 20.0, size=(6, 6, 6))
    mask = rng.uniform(size=(6, 6, 6)) < 0.6
    families = list(FAMILY_FEATURES)

    big_image = np.full((10, 10, 10), -50.0)
    big_mask = np.zeros((10, 10, 10), dtype=bool)
    big_image[3:9, 2:8, 4:10] = image
    big_mask[3:9, 2:8, 4:10] = mask

    a = region_features(image, mask, (1.0, 1.0, 1.0), families, 16)
    b = region_features(big_image, big_mask, (1.0, 1.0, 1.0), families, 16)

    assert a.keys() == b.keys()
    for name in a:
        assert a[name] == pytest.approx(b[name], rel=1e-9, abs=1e-12, nan_ok=True)
    assert shape_features(mask) == pytest.approx(shape_features(big_mask))


def test_quantize_crops() -> None:
    mask = np.zeros((6, 6, 6), dtype=bool)
    mask[2:4, 1:2, 3:6] = True

    quantized = quantize(np.ones((6, 6, 6)), mask, bin_count=8)

    assert quantized.levels.shape == (2, 1, 3)
    assert quantized.voxel_count == 6


SMALL_CONFIG = RadiomicsConfig(bin_count=8, modalities=["flair", "t1ce"])


def test_extract_matrix(
    phantom_pair: typing.Tuple[Subject, ClinicalRecord]
) -> None:
    subject, record = phantom_pair

    matrix = extract_matrix([subject], SMALL_CONFIG, clinical={subject.id: record})

    assert matrix.subject_ids == [subject.id]
    assert matrix.columns == feature_names(SMALL_CONFIG)
    assert matrix.frame.loc[subject.id, "age"] == record.age
    assert np.isfinite(matrix.frame.loc[subject.id, "wt_flair_firstorder_Mean"])


def test_extract_empty_region(phantom_subject: Subject) -> None:
    assert phantom_subject.ground_truth is not None
    labels = np.where(
        phantom_subject.ground_truth.data == 4, 1, phantom_subject.ground_truth.data
    )
    subject = Subject(
        id=phantom_subject.id,
        modalities=phantom_subject.modalities,
        ground_truth=Volume.label(labels),
    )

    matrix = extract_matrix([subject], SMALL_CONFIG)
    frame = matrix.frame

    et = [c for c in frame.columns if c.startswith("et_")]
    assert frame[et].isna().all(axis=None)

    finite = [
        c for c in frame.columns if c.startswith(("tc_", "wt_")) and "firstorder" in c
    ]
    assert np.isfinite(frame[finite].to_numpy()).all()
    assert frame[["age"]].isna().all(axis=None)


def test_extract_deterministic(phantom_subject: Subject) -> None:
    a = extract_matrix([phantom_subject], SMALL_CONFIG).values
    b = extract_matrix([phantom_subject], SMALL_CONFIG, threads=2).values

    assert np.array_equal(a, b, equal_nan=True)


def test_extract_missing_modality(phantom_subject: Subject) -> None:
    subject = Subject(
        id="partial",
        modalities={Modality.T1: phantom_subject.modalities[Modality.T1]},
        ground_truth=phantom_subject.ground_truth,
    )

    with pytest.raises(MissingModality):
        extract_matrix([subject], SMALL_CONFIG)


def test_feature_matrix_csv() -> None:
    frame = pd.DataFrame(
        {"a": [1.5, np.nan], "b": [0.1, 2.0]},
        index=pd.Index(["001", "002"], name="subject_id"),
    )

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "features.csv")
        FeatureMatrix(frame=frame).write_csv(path)
        with open(path) as h:
            text = h.read()
        loaded = FeatureMatrix.read_csv(path)

    assert "NA" in text
    assert loaded.subject_ids == ["001", "002"]
    assert np.array_equal(loaded.values, frame.to_numpy(), equal_nan=True)


def test_feature_matrix_csv_exact() -> None:
    values = np.random.default_rng(9).normal(300.0, 120.0, size=(20, 6))
    frame = pd.DataFrame(
        values,
        index=pd.Index([f"s{i:03d}" for i in range(20)], name="subject_id"),
        columns=[f"f{j}" for j in range(6)],
    )

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "features.csv")
        FeatureMatrix(frame=frame).write_csv(path)
        loaded = FeatureMatrix.read_csv(path)

    assert np.array_equal(loaded.values, values)


def test_clinical_record_columns(
    phantom_pair: typing.Tuple[Subject, ClinicalRecord]
) -> None:
    subject, _ = phantom_pair
    record = ClinicalRecord(
        subject_id=subject.id, age=50.0, resection_status="GTR"
    )

    matrix = extract_matrix([subject], SMALL_CONFIG, clinical={subject.id: record})

    assert matrix.frame.loc[subject.id, "resection_GTR"] == 1.0
    assert matrix.frame.loc[subject.id, "resection_STR"] == 0.0

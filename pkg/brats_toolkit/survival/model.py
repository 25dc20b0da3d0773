import json
import logging
import typing

import numpy as np
import pandas as pd
import pydantic

from ..clinical import ClinicalRecord
from ..error import SurvivalError
from ..models.base import BaseConfig
from ..models.survival import SurvivalConfig
from ..radiomics import FeatureMatrix
from .forest import ForestModel, rfr_fit, rfr_predict
from .scoring import SurvivalScores, score
from .selection import rank_importance, select_top_k
from .standardize import StandardizationRecord, standardize_apply, standardize_fit


logger = logging.getLogger(__name__)

PREDICTION_COLUMNS = ["subject_id", "predicted_days"]


class SurvivalModel(BaseConfig):
    """
    Everything needed to predict survival from a radiomics matrix.
    """

    standardization: StandardizationRecord = pydantic.Field(
        description="Training statistics"
    )
    ranking: typing.List[typing.Tuple[str, float]] = pydantic.Field(
        description="All standardized features by decreasing importance"
    )
    selected: typing.List[str] = pydantic.Field(description="Top-k feature names")
    forest: ForestModel = pydantic.Field(description="Forest fit on the selection")
    config: SurvivalConfig = pydantic.Field(description="Pipeline configuration")
    training_subjects: typing.List[str] = pydantic.Field(
        description="Subjects the model was fit on"
    )

    def save(self, path: str) -> None:
        with open(path, "w") as h:
            h.write(self.model_dump_json(indent=2))

    @classmethod
    def load(cls, path: str) -> "SurvivalModel":
        with open(path) as h:
            try:
                return cls.model_validate(json.load(h))
            except (json.JSONDecodeError, pydantic.ValidationError) as e:
                raise SurvivalError(f"{path} is not a survival model") from e


def training_subjects(
    matrix: FeatureMatrix,
    clinical: typing.Mapping[str, ClinicalRecord],
    gtr_only: bool = False,
) -> typing.List[str]:
    """
    Subjects with both features and a known survival time.
    """

    subjects = []
    for subject_id in matrix.subject_ids:
        record = clinical.get(subject_id)
        if record is None or record.survival_days is None:
            continue

        if gtr_only and record.resection_status != "GTR":
            continue

        subjects.append(subject_id)

    return subjects


def fit_survival_model(
    matrix: FeatureMatrix,
    clinical: typing.Mapping[str, ClinicalRecord],
    config: SurvivalConfig,
    seed: int,
    threads: int = 1,
) -> SurvivalModel:
    subjects = training_subjects(matrix, clinical, config.gtr_only)
    logger.info("Fitting survival model on %d subjects", len(subjects))

    rows = matrix.rows(subjects)
    targets = np.array([clinical[s].survival_days for s in subjects], dtype=float)

    record = standardize_fit(rows)
    scaled = standardize_apply(record, rows)

    ranking = rank_importance(
        scaled.values,
        targets,
        scaled.columns,
        config.forest,
        seed,
        method=config.importance,
        threads=threads,
    )

    k = config.top_k
    if k > len(ranking):
        logger.warning(
            "Only %d features survived standardization, selecting all", len(ranking)
        )
        k = len(ranking)

    selected = select_top_k(ranking, k)
    forest = rfr_fit(
        scaled.select(selected).values, targets, config.forest, seed, threads=threads
    )

    return SurvivalModel(
        standardization=record,
        ranking=ranking,
        selected=selected,
        forest=forest,
        config=config,
        training_subjects=subjects,
    )


def predict_survival(model: SurvivalModel, matrix: FeatureMatrix) -> pd.DataFrame:
    missing = sorted(set(model.standardization.columns) - set(matrix.columns))
    if missing:
        raise SurvivalError(f"feature matrix lacks {len(missing)} model columns")

    scaled = standardize_apply(model.standardization, matrix).select(model.selected)
    days = rfr_predict(model.forest, scaled.values)

    return pd.DataFrame(
        {"subject_id": scaled.subject_ids, "predicted_days": days},
        columns=PREDICTION_COLUMNS,
    )


def write_predictions(path: str, predictions: pd.DataFrame) -> None:
    predictions.to_csv(path, index=False, float_format="%.17g")


def read_predictions(path: str) -> typing.Dict[str, float]:
    frame = pd.read_csv(
        path, dtype={"subject_id": str}, float_precision="round_trip"
    )

    return {
        str(row.subject_id): float(row.predicted_days)
        for row in frame.itertuples(index=False)
    }


def score_predictions(
    predictions: typing.Mapping[str, float],
    clinical: typing.Mapping[str, ClinicalRecord],
    config: SurvivalConfig,
) -> typing.Tuple[SurvivalScores, typing.List[str]]:
    """
    Scores subjects that have both a prediction and a known survival time.
    """

    subjects = sorted(
        s
        for s in predictions
        if s in clinical and clinical[s].survival_days is not None
    )

    truth = [typing.cast(float, clinical[s].survival_days) for s in subjects]
    scores = score([predictions[s] for s in subjects], truth, config.bins)

    return scores, subjects

import logging
import typing
import warnings

import numpy as np
import pandas as pd
import pydantic

from ..error import TooFewRows
from ..models.base import BaseConfig
from ..radiomics import FeatureMatrix


logger = logging.getLogger(__name__)


class StandardizationRecord(BaseConfig):
    """
    Training statistics of the retained columns; zero-variance columns are
    dropped and listed.
    """

    columns: typing.List[str] = pydantic.Field(description="Retained feature names")
    mean: typing.List[float] = pydantic.Field(description="Training mean per column")
    std: typing.List[float] = pydantic.Field(
        description="Training population std per column"
    )
    dropped: typing.List[str] = pydantic.Field(
        default_factory=list, description="Zero-variance or all-missing columns"
    )


def standardize_fit(matrix: FeatureMatrix) -> StandardizationRecord:
    if len(matrix.subject_ids) < 2:
        raise TooFewRows("standardization needs at least two rows")

    values = matrix.values
    with warnings.catch_warnings():
        # all-NaN columns are dropped below
        warnings.simplefilter("ignore", category=RuntimeWarning)
        mean = np.nanmean(values, axis=0)
        std = np.nanstd(values, axis=0)

    keep = np.isfinite(std) & (std > 0)
    columns = matrix.columns
    dropped = [name for name, kept in zip(columns, keep) if not kept]
    if dropped:
        logger.info("Dropped %d zero-variance features", len(dropped))

    return StandardizationRecord(
        columns=[name for name, kept in zip(columns, keep) if kept],
        mean=[float(v) for v in mean[keep]],
        std=[float(v) for v in std[keep]],
        dropped=dropped,
    )


def standardize_apply(
    record: StandardizationRecord, matrix: FeatureMatrix
) -> FeatureMatrix:
    """
    Scale with the training statistics; missing values become 0.
    """

    selected = matrix.select(record.columns)
    scaled = (selected.values - np.array(record.mean)) / np.array(record.std)
    scaled = np.where(np.isnan(scaled), 0.0, scaled)

    frame = pd.DataFrame(
        scaled, index=selected.frame.index, columns=record.columns
    )

    return FeatureMatrix(frame=frame)

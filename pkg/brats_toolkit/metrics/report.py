import dataclasses
import typing

import numpy as np
import pandas as pd
import rich.console
import rich.table

from ..config import MISSING_VALUE
from ..error import MetricsError
from ..volume import Volume
from .hausdorff import hausdorff
from .overlap import Mask, dsc, sensitivity, specificity
from .regions import Region, region_masks


METRICS = ("dsc", "sens", "spec", "hd")
METRIC_COLUMNS = [f"{metric}_{region.value}" for metric in METRICS for region in Region]
STATISTICS = ("Mean", "StdDev", "Median")


@dataclasses.dataclass
class MetricsRow:
    subject_id: str
    values: typing.Dict[str, float]

    def get(self, metric: str, region: Region) -> float:
        return self.values[f"{metric}_{region.value}"]

    def mean_dsc(self) -> float:
        return float(np.mean([self.get("dsc", region) for region in Region]))


def metrics_row(
    subject_id: str,
    pred: typing.Union[Volume, np.ndarray],
    gt: typing.Union[Volume, np.ndarray],
    spacing: typing.Sequence[float] = (1.0, 1.0, 1.0),
    hd_percentile: float = 100.0,
) -> MetricsRow:
    values: typing.Dict[str, float] = {}
    for p, g in zip(region_masks(pred), region_masks(gt)):
        key = p.region.value
        values[f"dsc_{key}"] = dsc(p.mask, g.mask)
        values[f"sens_{key}"] = sensitivity(p.mask, g.mask)
        values[f"spec_{key}"] = specificity(p.mask, g.mask)
        values[f"hd_{key}"] = hausdorff(p.mask, g.mask, spacing, hd_percentile)

    return MetricsRow(subject_id=subject_id, values=values)


def region_dsc(pred: Mask, gt: Mask) -> typing.Dict[Region, float]:
    return {
        p.region: dsc(p.mask, g.mask)
        for p, g in zip(region_masks(pred), region_masks(gt))
    }


def rows_to_frame(rows: typing.Sequence[MetricsRow]) -> pd.DataFrame:
    frame = pd.DataFrame(
        [{"subject_id": row.subject_id, **row.values} for row in rows],
        columns=["subject_id", *METRIC_COLUMNS],
    )

    return frame


def aggregate(rows: typing.Sequence[MetricsRow]) -> pd.DataFrame:
    """
    Mean, population standard deviation and median of every metric column.
    """

    if not rows:
        raise MetricsError("aggregation needs at least one row")

    values = rows_to_frame(rows)[METRIC_COLUMNS].astype(np.float64)
    table = pd.DataFrame(
        [values.mean(), values.std(ddof=0), values.median()],
        index=list(STATISTICS),
    )
    table.index.name = "statistic"

    return table


def write_metrics_csv(path: str, rows: typing.Sequence[MetricsRow]) -> None:
    rows_to_frame(rows).to_csv(
        path, index=False, na_rep=MISSING_VALUE, float_format="%.6f"
    )


def write_aggregate_csv(path: str, table: pd.DataFrame) -> None:
    table.to_csv(path, na_rep=MISSING_VALUE, float_format="%.6f")


def read_metrics_csv(path: str) -> typing.List[MetricsRow]:
    frame = pd.read_csv(path, dtype={"subject_id": str}, na_values=[MISSING_VALUE])

    return [
        MetricsRow(
            subject_id=str(record["subject_id"]),
            values={column: float(record[column]) for column in METRIC_COLUMNS},
        )
        for record in frame.to_dict(orient="records")
    ]


def render_aggregate(
    table: pd.DataFrame, console: typing.Optional[rich.console.Console] = None
) -> None:
    if console is None:
        console = rich.console.Console()

    output = rich.table.Table(title="Segmentation metrics")
    output.add_column("Statistic", style="bold")
    for metric in METRICS:
        for region in Region:
            output.add_column(f"{metric.upper()} {region.name}", justify="right")

    for statistic, values in table.iterrows():
        output.add_row(
            str(statistic), *(f"{values[column]:.4f}" for column in METRIC_COLUMNS)
        )

    console.print(output)

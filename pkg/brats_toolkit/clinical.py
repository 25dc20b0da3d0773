import dataclasses
import math
import typing

import pandas as pd

from .config import MISSING_VALUE, NULL_VALUES


RESECTION_STATUSES = ("GTR", "STR", "NA")
CLINICAL_COLUMNS = ["subject_id", "age", "survival_days", "resection_status"]


@dataclasses.dataclass(frozen=True)
class ClinicalRecord:
    subject_id: str
    age: float
    survival_days: typing.Optional[float] = dataclasses.field(default=None)
    resection_status: str = dataclasses.field(default="NA")
    grade: typing.Optional[str] = dataclasses.field(default=None)


def _optional_float(value: typing.Any) -> typing.Optional[float]:
    if value in NULL_VALUES:
        return None

    number = float(value)
    return None if math.isnan(number) else number


def read_clinical(path: str) -> typing.Dict[str, ClinicalRecord]:
    """
    Clinical CSV keyed by subject id; missing cells are "NA" or empty.
    """

    frame = pd.read_csv(path, dtype=str, keep_default_na=False)

    records = {}
    for row in frame.to_dict(orient="records"):
        status = row.get("resection_status") or "NA"
        age = _optional_float(row.get("age"))
        records[row["subject_id"]] = ClinicalRecord(
            subject_id=row["subject_id"],
            age=math.nan if age is None else age,
            survival_days=_optional_float(row.get("survival_days")),
            resection_status=status if status in RESECTION_STATUSES else "NA",
            grade=None if row.get("grade") in NULL_VALUES else row["grade"],
        )

    return records


def write_clinical(path: str, records: typing.Iterable[ClinicalRecord]) -> None:
    rows = [
        {
            "subject_id": record.subject_id,
            "age": record.age,
            "survival_days": record.survival_days,
            "resection_status": record.resection_status,
            "grade": record.grade,
        }
        for record in records
    ]
    pd.DataFrame(rows, columns=[*CLINICAL_COLUMNS, "grade"]).to_csv(
        path, index=False, na_rep=MISSING_VALUE, float_format="%.2f"
    )

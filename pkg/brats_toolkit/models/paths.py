import os.path
import typing

import pydantic

from .base import BaseConfig


class PathsConfig(BaseConfig):
    """
    Locations of subject data and run outputs.
    """

    data_dir: str = pydantic.Field(default="data", description="Subject directory root")
    run_root: str = pydantic.Field(default="runs", description="Run directory root")
    clinical_file: str = pydantic.Field(
        default="clinical.csv", description="Clinical CSV inside data_dir"
    )
    file_pattern: str = pydantic.Field(
        default="{id}_{suffix}.nii", description="File name inside <data_dir>/<id>/"
    )
    suffixes: typing.Dict[str, str] = pydantic.Field(
        default_factory=lambda: {
            "flair": "flair",
            "t1": "t1",
            "t1ce": "t1ce",
            "t2": "t2",
            "seg": "seg",
        },
        description="File suffix per modality and for the ground truth",
    )

    def subject_file(self, root: str, subject_id: str, key: str) -> str:
        name = self.file_pattern.format(id=subject_id, suffix=self.suffixes[key])

        return os.path.join(root, subject_id, name)

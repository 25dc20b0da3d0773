import os
import os.path
import typing

from ..error import MissingFile
from ..models.paths import PathsConfig
from .nifti import read_nifti, save_nifti
from .volume import Modality, Subject, Volume, VolumeKind


def list_subjects(root: str) -> typing.List[str]:
    if not os.path.isdir(root):
        raise MissingFile(f"{root} is not a directory")

    subjects = []
    for _, directories, _ in os.walk(root):
        subjects += directories
        break

    return sorted(subjects)


def load_subject(
    root: str,
    subject_id: str,
    paths: PathsConfig,
    ground_truth: bool = True,
    grade: typing.Optional[str] = None,
) -> Subject:
    modalities = {}
    for modality in Modality:
        path = paths.subject_file(root, subject_id, modality.value)
        if not os.path.isfile(path):
            raise MissingFile(f"{path} is not a file")

        modalities[modality] = read_nifti(path)

    truth = None
    if ground_truth:
        path = paths.subject_file(root, subject_id, "seg")
        if not os.path.isfile(path):
            raise MissingFile(f"{path} is not a file")

        truth = read_nifti(path, kind=VolumeKind.Label)

    return Subject(
        id=subject_id, modalities=modalities, ground_truth=truth, grade=grade
    )


def save_subject(root: str, subject: Subject, paths: PathsConfig) -> None:
    os.makedirs(os.path.join(root, subject.id), exist_ok=True)

    for modality, volume in subject.modalities.items():
        save_nifti(paths.subject_file(root, subject.id, modality.value), volume)

    if subject.ground_truth is not None:
        save_nifti(paths.subject_file(root, subject.id, "seg"), subject.ground_truth)


def load_label(path: str) -> Volume:
    if not os.path.isfile(path):
        raise MissingFile(f"{path} is not a file")

    return read_nifti(path, kind=VolumeKind.Label)

import typing

import numpy as np

from ..error import TooFewSubjects


Split = typing.Tuple[typing.List[str], typing.List[str], typing.List[str]]


def stratified_split(
    grades: typing.Mapping[str, str],
    ratios: typing.Sequence[float],
    seed: int,
) -> Split:
    """
    Partition subject ids into (train, validation, test) per grade.

    Each grade contributes round(r * n) subjects to the first two splits and
    the remainder to the test split.
    """

    by_grade: typing.Dict[str, typing.List[str]] = {}
    for subject_id, grade in grades.items():
        by_grade.setdefault(grade, []).append(subject_id)

    rng = np.random.default_rng(seed)
    train: typing.List[str] = []
    validation: typing.List[str] = []
    test: typing.List[str] = []
    for grade in sorted(by_grade):
        members = sorted(by_grade[grade])
        if len(members) < 3:
            raise TooFewSubjects(
                f"grade {grade} has {len(members)} subjects, at least 3 are needed"
            )

        order = [members[i] for i in rng.permutation(len(members))]
        n_train = int(np.floor(ratios[0] * len(members) + 0.5))
        n_validation = int(np.floor(ratios[1] * len(members) + 0.5))
        n_validation = min(n_validation, len(members) - n_train)

        train += order[:n_train]
        validation += order[n_train : n_train + n_validation]
        test += order[n_train + n_validation :]

    return sorted(train), sorted(validation), sorted(test)

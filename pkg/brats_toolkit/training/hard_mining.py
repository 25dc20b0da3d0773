import concurrent.futures
import dataclasses
import logging
import os.path
import typing

import numpy as np
import pandas as pd

from ..metrics import region_dsc
from ..models.run import RunConfig
from ..network import NetworkState, predict_probabilities, probabilities_to_labels
from ..volume import Subject
from .trainer import EpochRecord, TrainingSubject, _as_prepared, train_stage
from .weights import class_weights


logger = logging.getLogger(__name__)


Scorer = typing.Callable[[NetworkState, TrainingSubject], float]


@dataclasses.dataclass
class HardMiningReport:
    stage: int
    threshold: float
    dsc: typing.Dict[str, float]
    selected: typing.List[str]

    def to_frame(self) -> pd.DataFrame:
        chosen = set(self.selected)
        return pd.DataFrame(
            {
                "subject_id": list(self.dsc.keys()),
                "dsc": list(self.dsc.values()),
                "selected": [subject_id in chosen for subject_id in self.dsc],
            }
        )

    def write_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.6f")


def subject_dsc(
    state: NetworkState, subject: TrainingSubject, run: RunConfig
) -> float:
    """
    Mean of the ET, TC and WT DSC of a full-volume prediction.
    """

    truth = subject.subject.ground_truth
    assert truth is not None

    probs = predict_probabilities(state, subject.subject, run.patches, subject.inputs)
    scores = region_dsc(probabilities_to_labels(probs), truth.data)

    return float(np.mean(list(scores.values())))


def select_hard(dscs: typing.Mapping[str, float], threshold: float) -> typing.List[str]:
    return [subject_id for subject_id, value in dscs.items() if value < threshold]


def hard_mine(
    state: NetworkState,
    subjects: typing.Sequence[typing.Union[Subject, TrainingSubject]],
    threshold: float,
    run: RunConfig,
    stage: int = 0,
    scorer: typing.Optional[Scorer] = None,
) -> HardMiningReport:
    data = _as_prepared(subjects)

    def score(subject: TrainingSubject) -> float:
        if scorer is not None:
            return scorer(state, subject)

        return subject_dsc(state, subject, run)

    with concurrent.futures.ThreadPoolExecutor(max_workers=run.threads) as pool:
        values = list(pool.map(score, data))

    dscs = {d.subject.id: value for d, value in zip(data, values)}
    report = HardMiningReport(
        stage=stage,
        threshold=threshold,
        dsc=dscs,
        selected=select_hard(dscs, threshold),
    )
    logger.info(
        "Hard mining stage %d at DSC < %.3f selected %d of %d subjects",
        stage,
        threshold,
        len(report.selected),
        len(dscs),
    )

    return report


def hard_mining_schedule(
    state: NetworkState,
    subjects: typing.Sequence[typing.Union[Subject, TrainingSubject]],
    run: RunConfig,
    rng: np.random.Generator,
    validation: typing.Sequence[typing.Union[Subject, TrainingSubject]] = (),
    weights: typing.Optional[np.ndarray] = None,
    run_dir: typing.Optional[str] = None,
    scorer: typing.Optional[Scorer] = None,
    on_epoch: typing.Optional[typing.Callable[[EpochRecord], None]] = None,
) -> typing.Tuple[NetworkState, typing.List[HardMiningReport]]:
    """
    One fine-tuning round per ascending threshold, on the subjects whose DSC
    falls below it. Rounds with no selected subject are skipped.
    """

    data = _as_prepared(subjects)
    held_out = _as_prepared(validation)
    if weights is None:
        weights = class_weights(
            d.subject.ground_truth for d in data if d.subject.ground_truth is not None
        )

    reports = []
    for stage, threshold in enumerate(run.train.hard_mining_thresholds, start=1):
        report = hard_mine(state, data, threshold, run, stage=stage, scorer=scorer)
        reports.append(report)

        if run_dir is not None:
            report.write_csv(os.path.join(run_dir, f"hard_mining_stage{stage}.csv"))

        if not report.selected:
            logger.info("Hard mining stage %d selected nothing, skipping", stage)
            continue

        chosen = set(report.selected)
        state, _ = train_stage(
            state,
            [d for d in data if d.subject.id in chosen],
            run,
            rng,
            validation=held_out,
            epochs=run.train.fine_tune_epochs,
            weights=weights,
            stage=f"hard_mining_{stage}",
            log_path=os.path.join(run_dir, "train_log.jsonl") if run_dir else None,
            on_epoch=on_epoch,
        )

    return state, reports

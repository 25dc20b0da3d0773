import dataclasses
import json
import logging
import math
import queue
import threading
import typing

import numpy as np

from ..autodiff import (
    AdamState,
    Tensor,
    adam_step,
    dice_loss,
    one_hot,
    softmax,
    weighted_cross_entropy,
)
from ..config import CLASS_TO_LABEL, NUM_CLASSES
from ..error import NonFiniteLoss, TrainingError
from ..metrics import Region, region_dsc
from ..models.run import RunConfig
from ..network import NetworkState, forward
from ..patches import PatchBatch, sample_training_patches, stack_modalities
from ..volume import Subject
from .scheduler import PlateauScheduler
from .weights import class_weights


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class EpochRecord:
    stage: str
    epoch: int
    train_loss: float
    val_loss: float
    lr: float
    val_dsc_et: float
    val_dsc_tc: float
    val_dsc_wt: float

    def to_json(self) -> str:
        record = {
            key: (None if isinstance(value, float) and math.isnan(value) else value)
            for key, value in dataclasses.asdict(self).items()
        }

        return json.dumps(record)


@dataclasses.dataclass(frozen=True)
class TrainingSubject:
    subject: Subject
    inputs: np.ndarray


def prepare(subjects: typing.Sequence[Subject]) -> typing.List[TrainingSubject]:
    return [
        TrainingSubject(subject=subject, inputs=stack_modalities(subject))
        for subject in subjects
    ]


def _as_prepared(
    subjects: typing.Sequence[typing.Union[Subject, TrainingSubject]]
) -> typing.List[TrainingSubject]:
    return [
        s if isinstance(s, TrainingSubject) else prepare([s])[0] for s in subjects
    ]


def compute_loss(
    state: NetworkState,
    batch: PatchBatch,
    loss: str,
    weights: np.ndarray,
) -> Tensor:
    logits = forward(state, batch.inputs)
    if loss == "dice":
        return dice_loss(softmax(logits, axis=1), one_hot(batch.targets, NUM_CLASSES))

    return weighted_cross_entropy(logits, batch.targets, weights)


class _Done:
    pass


def _produce(
    out: "queue.Queue[typing.Any]",
    data: typing.Sequence[TrainingSubject],
    run: RunConfig,
    seed: int,
    epochs: int,
    stop: threading.Event,
) -> None:
    """
    Sample every epoch's batches in order; None marks the end of an epoch.
    """

    rng = np.random.default_rng(seed)
    try:
        for _ in range(epochs):
            order = rng.permutation(len(data))
            epoch = PatchBatch.concat(
                [
                    sample_training_patches(
                        data[i].subject,
                        run.patches,
                        run.train.patches_per_subject,
                        rng,
                        inputs=data[i].inputs,
                    )
                    for i in order
                ]
            )
            shuffle = rng.permutation(len(epoch))
            for start in range(0, len(shuffle), run.train.batch_size):
                if stop.is_set():
                    return

                index = shuffle[start : start + run.train.batch_size]
                out.put(
                    PatchBatch(
                        inputs=Tensor(epoch.inputs.data[index]),
                        targets=epoch.targets[index],
                        provenance=[epoch.provenance[i] for i in index],
                        center_classes=epoch.center_classes[index],
                    )
                )
            out.put(None)
    except Exception as e:
        out.put(e)

    out.put(_Done())


def validation_batches(
    data: typing.Sequence[TrainingSubject], run: RunConfig, seed: int
) -> typing.List[PatchBatch]:
    """
    Fixed validation patches, drawn once per stage.
    """

    rng = np.random.default_rng(seed)
    batches = [
        sample_training_patches(
            d.subject, run.patches, run.train.validation_patches, rng, inputs=d.inputs
        )
        for d in data
    ]
    if not batches:
        return []

    merged = PatchBatch.concat(batches)
    size = run.train.batch_size

    return [
        PatchBatch(
            inputs=Tensor(merged.inputs.data[start : start + size]),
            targets=merged.targets[start : start + size],
            provenance=merged.provenance[start : start + size],
            center_classes=merged.center_classes[start : start + size],
        )
        for start in range(0, len(merged), size)
    ]


def evaluate_batches(
    state: NetworkState,
    batches: typing.Sequence[PatchBatch],
    loss: str,
    weights: np.ndarray,
) -> typing.Tuple[float, typing.Dict[Region, float]]:
    """
    Mean loss and region DSC pooled over the given patches.
    """

    frozen = NetworkState(
        spec=state.spec,
        params={name: t.detach() for name, t in state.params.items()},
    )
    lookup = np.array(CLASS_TO_LABEL, dtype=np.uint8)

    losses, sizes, predictions, targets = [], [], [], []
    for batch in batches:
        logits = forward(frozen, batch.inputs)
        if loss == "dice":
            value = dice_loss(
                softmax(logits, axis=1), one_hot(batch.targets, NUM_CLASSES)
            )
        else:
            value = weighted_cross_entropy(logits, batch.targets, weights)

        losses.append(value.item())
        sizes.append(len(batch))
        predictions.append(lookup[np.argmax(logits.data, axis=1)])
        targets.append(lookup[batch.targets])

    mean_loss = float(np.average(losses, weights=sizes))
    scores = region_dsc(np.concatenate(predictions), np.concatenate(targets))

    return mean_loss, scores


def train_stage(
    state: NetworkState,
    subjects: typing.Sequence[typing.Union[Subject, TrainingSubject]],
    run: RunConfig,
    rng: np.random.Generator,
    validation: typing.Sequence[typing.Union[Subject, TrainingSubject]] = (),
    epochs: typing.Optional[int] = None,
    weights: typing.Optional[np.ndarray] = None,
    stage: str = "base",
    log_path: typing.Optional[str] = None,
    on_epoch: typing.Optional[typing.Callable[[EpochRecord], None]] = None,
) -> typing.Tuple[NetworkState, typing.List[EpochRecord]]:
    """
    Train on class-balanced patches, decaying the learning rate on validation
    plateaus. Returns the state with the best validation loss.
    """

    if not subjects:
        raise TrainingError("train_stage needs at least one subject")

    config = run.train
    epochs = config.epochs if epochs is None else epochs
    data = _as_prepared(subjects)
    held_out = _as_prepared(validation)

    if weights is None:
        weights = class_weights(
            d.subject.ground_truth for d in data if d.subject.ground_truth is not None
        )

    validation_set = validation_batches(
        held_out, run, int(rng.integers(np.iinfo(np.int64).max))
    )
    producer_seed = int(rng.integers(np.iinfo(np.int64).max))

    scheduler = PlateauScheduler(
        lr=config.lr0, patience=config.plateau_patience, factor=config.lr_decay_factor
    )
    adam = AdamState()

    batches: "queue.Queue[typing.Any]" = queue.Queue(maxsize=config.queue_size)
    stop = threading.Event()
    producer = threading.Thread(
        target=_produce,
        args=(batches, data, run, producer_seed, epochs, stop),
        daemon=True,
    )
    producer.start()

    best_state = state.clone()
    best_loss = math.inf
    history: typing.List[EpochRecord] = []
    log = open(log_path, "a") if log_path else None
    try:
        for epoch in range(epochs):
            train_losses = []
            while True:
                item = batches.get()
                if item is None:
                    break

                if isinstance(item, Exception):
                    raise item

                if isinstance(item, _Done):
                    raise TrainingError("patch producer stopped early")

                state.zero_grad()
                loss = compute_loss(state, item, config.loss, weights)
                value = loss.item()
                if not np.isfinite(value):
                    raise NonFiniteLoss(
                        f"{stage} epoch {epoch}: loss is {value} at lr {scheduler.lr}"
                    )

                loss.backward()
                grads = {name: t.grad for name, t in state.params.items()}
                adam_step(adam, state.params, grads, scheduler.lr)
                train_losses.append(value)

            train_loss = float(np.mean(train_losses))
            if validation_set:
                val_loss, scores = evaluate_batches(
                    state, validation_set, config.loss, weights
                )
            else:
                val_loss = train_loss
                scores = {region: math.nan for region in Region}

            record = EpochRecord(
                stage=stage,
                epoch=epoch,
                train_loss=train_loss,
                val_loss=val_loss,
                lr=scheduler.lr,
                val_dsc_et=scores[Region.ET],
                val_dsc_tc=scores[Region.TC],
                val_dsc_wt=scores[Region.WT],
            )
            history.append(record)
            logger.debug("%s", record)

            if log is not None:
                log.write(record.to_json() + "\n")
                log.flush()

            if on_epoch is not None:
                on_epoch(record)

            if val_loss < best_loss:
                best_loss = val_loss
                best_state = state.clone()

            scheduler.step(val_loss)
    finally:
        stop.set()
        while producer.is_alive():
            try:
                batches.get_nowait()
            except queue.Empty:
                producer.join(timeout=0.1)

        if log is not None:
            log.close()

    return best_state, history

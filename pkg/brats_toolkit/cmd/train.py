import argparse
import dataclasses
import os.path
import typing

import numpy as np
import rich.progress

from ..error import LibError
from ..network import build, count_layers, save_state
from ..training import EpochRecord, prepare, train_stage
from .common import (
    CliContext,
    create_run_dir,
    load_cohort,
    run_step,
    split_subjects,
    write_json,
)


@dataclasses.dataclass(frozen=True)
class Args:
    data: typing.Optional[str] = dataclasses.field(default=None)
    epochs: typing.Optional[int] = dataclasses.field(default=None)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-d", "--data", help="Data directory, defaults to paths.data_dir"
    )
    parser.add_argument(
        "-e", "--epochs", type=int, help="Override train.epochs", default=None
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    data_dir = args.data or config.paths.data_dir
    run_dir = create_run_dir(cli_context, "train")
    epochs = args.epochs or config.train.epochs

    def step() -> typing.Sequence[LibError]:
        train_ids, val_ids, test_ids = split_subjects(config, data_dir)
        write_json(
            os.path.join(run_dir, "split.json"),
            {"train": train_ids, "validation": val_ids, "test": test_ids},
        )

        training = prepare(load_cohort(config, data_dir, train_ids))
        validation = prepare(load_cohort(config, data_dir, val_ids))

        state = build(config.network, config.seed)
        rng = np.random.default_rng(config.seed)

        with rich.progress.Progress(console=cli_context.console) as progress:
            task = progress.add_task(
                f"Training {count_layers(config.network)} layers", total=epochs
            )

            def on_epoch(record: EpochRecord) -> None:
                progress.update(
                    task,
                    advance=1,
                    description=f"epoch {record.epoch} val_loss {record.val_loss:.4f}",
                )

            best, _ = train_stage(
                state,
                training,
                config,
                rng,
                validation=validation,
                epochs=epochs,
                log_path=os.path.join(run_dir, "train_log.jsonl"),
                on_epoch=on_epoch,
            )

        save_state(os.path.join(run_dir, "model.ckpt"), best, stage="base")

        return []

    return run_step(cli_context, "train", step)

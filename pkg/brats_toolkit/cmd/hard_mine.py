import argparse
import dataclasses
import os.path
import typing

import numpy as np

from ..error import LibError
from ..network import load_state, save_state
from ..training import hard_mining_schedule, prepare
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
    checkpoint: str
    data: typing.Optional[str] = dataclasses.field(default=None)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-m", "--checkpoint", required=True, help="Checkpoint written by train"
    )
    parser.add_argument(
        "-d", "--data", help="Data directory, defaults to paths.data_dir"
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    data_dir = args.data or config.paths.data_dir
    run_dir = create_run_dir(cli_context, "hard-mine")

    def step() -> typing.Sequence[LibError]:
        state, _ = load_state(args.checkpoint)

        # same seed and data reproduce the split used by train
        train_ids, val_ids, _ = split_subjects(config, data_dir)
        training = prepare(load_cohort(config, data_dir, train_ids))
        validation = prepare(load_cohort(config, data_dir, val_ids))

        rng = np.random.default_rng([config.seed, 1])
        state, reports = hard_mining_schedule(
            state, training, config, rng, validation=validation, run_dir=run_dir
        )

        write_json(
            os.path.join(run_dir, "hard_mining.json"),
            [
                {
                    "stage": r.stage,
                    "threshold": r.threshold,
                    "selected": r.selected,
                }
                for r in reports
            ],
        )

        stage = f"hard_mining_{len(reports)}" if reports else "base"
        save_state(os.path.join(run_dir, "model.ckpt"), state, stage=stage)

        return []

    return run_step(cli_context, "hard-mine", step)

import argparse
import dataclasses
import os.path
import typing

import pandas as pd
import rich.table

from ..clinical import read_clinical
from ..error import LibError
from ..survival import read_predictions, score_predictions
from .common import CliContext, clinical_path, create_run_dir, run_step


@dataclasses.dataclass(frozen=True)
class Args:
    predictions: str
    clinical: typing.Optional[str] = dataclasses.field(default=None)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-p", "--predictions", required=True, help="predictions.csv"
    )
    parser.add_argument(
        "-c",
        "--clinical",
        help="Clinical CSV, defaults to paths.clinical_file in paths.data_dir",
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    run_dir = create_run_dir(cli_context, "survival-score")

    def step() -> typing.Sequence[LibError]:
        clinical = read_clinical(
            args.clinical or clinical_path(config, config.paths.data_dir)
        )
        scores, subjects = score_predictions(
            read_predictions(args.predictions), clinical, config.survival
        )

        values = scores.as_dict()
        pd.DataFrame([values]).to_csv(
            os.path.join(run_dir, "survival_scores.csv"),
            index=False,
            float_format="%.17g",
        )

        if cli_context.console:
            table = rich.table.Table(title=f"Survival ({len(subjects)} subjects)")
            for name in values:
                table.add_column(name, justify="right")
            table.add_row(*(f"{v:.4f}" for v in values.values()))
            cli_context.console.print(table)

        return []

    return run_step(cli_context, "survival-score", step)

import argparse
import dataclasses
import os.path
import typing

import pandas as pd

from ..clinical import read_clinical
from ..error import LibError
from ..radiomics import FeatureMatrix
from ..survival import fit_survival_model
from .common import CliContext, clinical_path, create_run_dir, run_step


@dataclasses.dataclass(frozen=True)
class Args:
    features: str
    clinical: typing.Optional[str] = dataclasses.field(default=None)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-f", "--features", required=True, help="features.csv written by radiomics"
    )
    parser.add_argument(
        "-c",
        "--clinical",
        help="Clinical CSV, defaults to paths.clinical_file in paths.data_dir",
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    run_dir = create_run_dir(cli_context, "survival-train")

    def step() -> typing.Sequence[LibError]:
        matrix = FeatureMatrix.read_csv(args.features)
        clinical = read_clinical(
            args.clinical or clinical_path(config, config.paths.data_dir)
        )

        model = fit_survival_model(
            matrix, clinical, config.survival, config.seed, threads=config.threads
        )
        model.save(os.path.join(run_dir, "survival_model.json"))

        pd.DataFrame(model.ranking, columns=["feature", "importance"]).to_csv(
            os.path.join(run_dir, "feature_ranking.csv"),
            index=False,
            float_format="%.17g",
        )

        return []

    return run_step(cli_context, "survival-train", step)

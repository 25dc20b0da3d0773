import argparse
import dataclasses
import os.path
import typing

from ..error import LibError
from ..radiomics import FeatureMatrix
from ..survival import SurvivalModel, predict_survival, write_predictions
from .common import CliContext, create_run_dir, run_step


@dataclasses.dataclass(frozen=True)
class Args:
    model: str
    features: str


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-m", "--model", required=True, help="survival_model.json"
    )
    parser.add_argument("-f", "--features", required=True, help="features.csv")


def cli(args: Args, cli_context: CliContext) -> bool:
    run_dir = create_run_dir(cli_context, "survival-predict")

    def step() -> typing.Sequence[LibError]:
        model = SurvivalModel.load(args.model)
        predictions = predict_survival(model, FeatureMatrix.read_csv(args.features))
        write_predictions(os.path.join(run_dir, "predictions.csv"), predictions)

        return []

    return run_step(cli_context, "survival-predict", step)

import argparse
import dataclasses
import os.path
import typing

from ..error import LibError, StepError
from ..radiomics import extract_matrix, feature_names
from ..volume import Volume
from ..volume.layout import load_label
from .common import (
    CliContext,
    create_run_dir,
    load_clinical,
    load_cohort,
    resolve_subjects,
    run_step,
)


@dataclasses.dataclass(frozen=True)
class Args:
    data: typing.Optional[str] = dataclasses.field(default=None)
    segmentations: typing.Optional[str] = dataclasses.field(default=None)
    suffix: str = dataclasses.field(default="seg")
    subject: typing.Sequence[str] = dataclasses.field(default_factory=list)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-d", "--data", help="Data directory, defaults to paths.data_dir"
    )
    parser.add_argument(
        "--segmentations",
        help="Directory of predicted <id>_<suffix>.nii labels",
        default=None,
    )
    parser.add_argument("--suffix", default="seg", help="Segmentation file suffix")
    parser.add_argument(
        "-s",
        "--subject",
        action="append",
        help="Subject ids, defaults to every subject",
        default=[],
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    data_dir = args.data or config.paths.data_dir
    predicted = config.radiomics.segmentation == "predicted"
    run_dir = create_run_dir(cli_context, "radiomics")

    def step() -> typing.Sequence[LibError]:
        if predicted and args.segmentations is None:
            return [
                StepError(
                    context="radiomics",
                    msg="predicted segmentation needs --segmentations",
                )
            ]

        subject_ids = resolve_subjects(data_dir, args.subject)
        subjects = load_cohort(
            config, data_dir, subject_ids, ground_truth=not predicted
        )

        segmentations: typing.Optional[typing.Dict[str, Volume]] = None
        if predicted:
            assert args.segmentations is not None
            segmentations = {
                subject_id: load_label(
                    os.path.join(args.segmentations, f"{subject_id}_{args.suffix}.nii")
                )
                for subject_id in subject_ids
            }

        matrix = extract_matrix(
            subjects,
            config.radiomics,
            segmentations=segmentations,
            clinical=load_clinical(config, data_dir),
            threads=config.threads,
        )
        matrix.write_csv(os.path.join(run_dir, "features.csv"))

        if cli_context.console:
            cli_context.console.print(
                f"{len(feature_names(config.radiomics))} features"
                f" for {len(subject_ids)} subjects"
            )

        return []

    return run_step(cli_context, "radiomics", step)

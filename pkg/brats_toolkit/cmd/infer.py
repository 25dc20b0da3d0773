import argparse
import dataclasses
import os.path
import typing

from ..error import LibError, from_exception
from ..network import load_state, predict_probabilities, probabilities_to_labels
from ..volume import Volume, save_nifti
from ..volume.layout import load_subject
from .common import (
    CliContext,
    cli_subject_wrapper,
    create_run_dir,
    report,
    resolve_subjects,
)


@dataclasses.dataclass(frozen=True)
class Args:
    checkpoint: str
    data: typing.Optional[str] = dataclasses.field(default=None)
    subject: typing.Sequence[str] = dataclasses.field(default_factory=list)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-m", "--checkpoint", required=True, help="Network checkpoint"
    )
    parser.add_argument(
        "-d", "--data", help="Data directory, defaults to paths.data_dir"
    )
    parser.add_argument(
        "-s",
        "--subject",
        action="append",
        help="Subject ids, defaults to every subject",
        default=[],
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    """
    Writes ``<id>_prob<c>.nii`` per class and the argmax ``<id>_pred.nii``.
    """

    config = cli_context.config
    data_dir = args.data or config.paths.data_dir
    run_dir = create_run_dir(cli_context, "infer")
    try:
        state, _ = load_state(args.checkpoint)
    except Exception as e:
        return report(cli_context, [from_exception(e)], ["infer"])

    def infer(subject_id: str) -> typing.Sequence[LibError]:
        subject = load_subject(data_dir, subject_id, config.paths, ground_truth=False)
        probs = predict_probabilities(state, subject, config.patches)

        for c, channel in enumerate(probs):
            save_nifti(
                os.path.join(run_dir, f"{subject_id}_prob{c}.nii"),
                Volume.intensity(channel, subject.spacing),
            )

        save_nifti(
            os.path.join(run_dir, f"{subject_id}_pred.nii"),
            Volume.label(probabilities_to_labels(probs), subject.spacing),
        )

        return []

    return cli_subject_wrapper(
        cli_context, "infer", resolve_subjects(data_dir, args.subject), infer
    )

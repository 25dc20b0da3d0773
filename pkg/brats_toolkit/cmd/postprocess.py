import argparse
import dataclasses
import os.path
import typing

import numpy as np

from ..error import LibError, StepError
from ..postprocess import postprocess_probabilities
from ..volume import read_nifti, save_nifti
from .common import CliContext, cli_subject_wrapper, create_run_dir, prediction_ids


@dataclasses.dataclass(frozen=True)
class Args:
    predictions: str


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-p",
        "--predictions",
        required=True,
        help="Directory of <id>_prob<c>.nii files written by infer",
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    run_dir = create_run_dir(cli_context, "postprocess")
    classes = config.network.num_classes

    def postprocess(subject_id: str) -> typing.Sequence[LibError]:
        channels = []
        for c in range(classes):
            path = os.path.join(args.predictions, f"{subject_id}_prob{c}.nii")
            if not os.path.isfile(path):
                return [StepError(context=subject_id, msg=f"missing {path}")]

            channels.append(read_nifti(path))

        probs = np.stack([v.data.astype(np.float64) for v in channels])
        labels = postprocess_probabilities(
            probs, channels[0].spacing, config.crf, config.components
        )
        save_nifti(os.path.join(run_dir, f"{subject_id}_seg.nii"), labels)

        return []

    subject_ids = prediction_ids(args.predictions, "prob0")

    return cli_subject_wrapper(cli_context, "postprocess", subject_ids, postprocess)

import argparse
import dataclasses
import os.path
import typing

from ..error import LibError, StepError
from ..metrics import (
    MetricsRow,
    aggregate,
    metrics_row,
    render_aggregate,
    write_aggregate_csv,
    write_metrics_csv,
)
from ..volume.layout import load_label
from .common import (
    CliContext,
    cli_subject_wrapper,
    create_run_dir,
    prediction_ids,
    report,
)


@dataclasses.dataclass(frozen=True)
class Args:
    predictions: str
    suffix: str = dataclasses.field(default="seg")
    data: typing.Optional[str] = dataclasses.field(default=None)
    hd95: bool = dataclasses.field(default=False)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-p",
        "--predictions",
        required=True,
        help="Directory of <id>_<suffix>.nii label volumes",
    )
    parser.add_argument(
        "--suffix", default="seg", help="Prediction file suffix, seg or pred"
    )
    parser.add_argument(
        "-d", "--data", help="Data directory, defaults to paths.data_dir"
    )
    parser.add_argument(
        "--hd95",
        action="store_true",
        default=False,
        help="Report the 95th percentile Hausdorff distance",
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    data_dir = args.data or config.paths.data_dir
    run_dir = create_run_dir(cli_context, "evaluate")
    percentile = 95.0 if args.hd95 else 100.0

    rows: typing.Dict[str, MetricsRow] = {}

    def evaluate(subject_id: str) -> typing.Sequence[LibError]:
        name = f"{subject_id}_{args.suffix}.nii"
        pred = load_label(os.path.join(args.predictions, name))
        truth = load_label(config.paths.subject_file(data_dir, subject_id, "seg"))
        rows[subject_id] = metrics_row(
            subject_id, pred, truth, truth.spacing, hd_percentile=percentile
        )

        return []

    subject_ids = prediction_ids(args.predictions, args.suffix)
    if not subject_ids:
        return report(
            cli_context,
            [StepError(context=args.predictions, msg="holds no predictions")],
            ["evaluate"],
        )

    is_ok = cli_subject_wrapper(cli_context, "evaluate", subject_ids, evaluate)
    if not is_ok:
        return False

    ordered = [rows[subject_id] for subject_id in sorted(rows)]
    table = aggregate(ordered)
    write_metrics_csv(os.path.join(run_dir, "metrics.csv"), ordered)
    write_aggregate_csv(os.path.join(run_dir, "aggregate.csv"), table)
    render_aggregate(table, cli_context.console)

    return True

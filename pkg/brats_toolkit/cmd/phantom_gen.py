import argparse
import dataclasses
import os.path
import typing

from ..error import LibError
from ..phantom import generate_cohort, write_cohort
from .common import CliContext, create_run_dir, run_step, write_json


@dataclasses.dataclass(frozen=True)
class Args:
    count: int
    output: typing.Optional[str] = dataclasses.field(default=None)


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-n", "--count", type=int, default=20, help="Number of subjects"
    )
    parser.add_argument(
        "-o",
        "--output",
        help="Data directory, defaults to paths.data_dir",
        default=None,
    )


def cli(args: Args, cli_context: CliContext) -> bool:
    config = cli_context.config
    output = args.output or config.paths.data_dir
    run_dir = create_run_dir(cli_context, "phantom-gen")

    def step() -> typing.Sequence[LibError]:
        cohort = generate_cohort(config.phantom, args.count, threads=config.threads)
        write_cohort(cohort, output, config.paths)

        write_json(
            os.path.join(run_dir, "phantom.json"),
            {
                "data_dir": output,
                "subjects": [s.id for s in cohort.subjects],
                "hard": sorted(cohort.hard),
                "class_frequencies": cohort.frequencies().tolist(),
            },
        )

        return []

    return run_step(cli_context, "phantom-gen", step)

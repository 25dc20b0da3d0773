import argparse
import dataclasses
import json
import os.path

from ..error import IoError
from ..models.run import RunConfig
from .common import CliContext, report


@dataclasses.dataclass(frozen=True)
class Args:
    output: str


def cli_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-o", "--output", help="Output directory", default="doc")


def cli(args: Args, cli_context: CliContext) -> bool:
    parent = os.path.dirname(os.path.abspath(args.output))
    if not os.path.isdir(parent):
        return report(
            cli_context, [IoError(context=parent, msg="is not a directory")], ["doc"]
        )

    os.makedirs(args.output, exist_ok=True)

    with open(os.path.join(args.output, "config.json"), "w") as h:
        json.dump(RunConfig.model_json_schema(), h, indent=2)

    return True

import argparse
import dataclasses

from .common import CliContext


@dataclasses.dataclass(frozen=True)
class Args:
    pass


def cli_args(parser: argparse.ArgumentParser) -> None:
    pass


def cli(args: Args, cli_context: CliContext) -> bool:
    """
    The configuration already parsed; print it with every default resolved.
    """

    if cli_context.console:
        cli_context.console.print_json(cli_context.config.model_dump_json())

    return True

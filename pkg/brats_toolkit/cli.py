import argparse
import json
import logging
import os
import sys
import time
import typing

import rich.console
import rich.logging

from .cmd.cli import CLI, Command, Menu
from .cmd.common import CliContext, load_config
from .config import CONFIG_ENV
from .error import error_line, print_errors


def build_command(
    subparser: argparse._SubParsersAction,  # type: ignore
    name: str,
    command: Command,
) -> None:
    parser = subparser.add_parser(name=name, help=command.help)
    command.args(parser)


def build_menu(parser: argparse.ArgumentParser, menu: Menu, depth: int = 0) -> None:
    subparser = parser.add_subparsers(dest=f"_{depth}", required=True)

    for option_name, option in menu.options.items():
        if isinstance(option, Command):
            build_command(subparser, option_name, option)
        elif isinstance(option, Menu):
            build_menu(
                subparser.add_parser(name=option_name, help=option.help),
                option,
                depth + 1,
            )


def run_menu(
    args: typing.Any, menu: Menu, cli_context: CliContext, depth: int = 0
) -> bool:
    target = getattr(args, f"_{depth}")

    option = menu.options.get(target)
    if isinstance(option, Command):
        return option.cli(args, cli_context)
    elif isinstance(option, Menu):
        return run_menu(args, option, cli_context, depth + 1)

    return False


def positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")

    return number


def setup_logging(console: rich.console.Console, quiet: bool, verbose: bool) -> None:
    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[rich.logging.RichHandler(console=console, show_path=False)],
        force=True,
    )


def cli() -> int:
    parser = argparse.ArgumentParser(prog="brats")

    parser.add_argument(
        "--config",
        help=f"JSON run configuration, defaults to ${CONFIG_ENV}",
        default=os.environ.get(CONFIG_ENV),
    )
    parser.add_argument(
        "--threads", type=positive_int, help="Worker thread cap", default=None
    )
    parser.add_argument(
        "--quiet", action="store_true", help="Turn off logging", default=False
    )
    parser.add_argument(
        "--verbose", action="store_true", help="Debug logging", default=False
    )

    build_menu(parser, CLI)

    args = parser.parse_args()

    console = rich.console.Console(quiet=args.quiet)
    # warnings still reach stderr when the console is muted
    log_console = rich.console.Console(stderr=True) if args.quiet else console
    setup_logging(log_console, args.quiet, args.verbose)

    path = []
    i = 0
    while True:
        try:
            path.append(getattr(args, f"_{i}"))
        except AttributeError:
            break

        i += 1

    console.print(f"[bold blue]brats-toolkit[/] - [yellow]{' '.join(path)}[/]\n")

    config, errors = load_config(args.config, args.threads)
    if config is None:
        print_errors(errors=errors, prefix=["config"], console=console)
        print(error_line(errors[0]), file=sys.stderr)
        return 1

    cli_context = CliContext(config=config, console=console)

    start = time.time()
    is_ok = run_menu(args, CLI, cli_context)
    end = time.time()

    delta = end - start
    delta_str = f"{delta:.2f}s"

    console.print()

    if is_ok:
        console.print(
            "[bold green]OK[/]", "in", f"[green]{delta_str}[/]", highlight=False
        )
    else:
        console.print(
            "[bold red]ERROR[/]", "in", f"[red]{delta_str}[/]", highlight=False
        )

        if cli_context.errors:
            line = error_line(cli_context.errors[0])
        else:
            line = json.dumps(
                {"error": "StepError", "module": "cli", "message": " ".join(path)}
            )
        print(line, file=sys.stderr)

    return 0 if is_ok else 1

import abc
import dataclasses
import datetime
import json
import typing

import rich.columns
import rich.console
import rich.markup
import rich.panel
import rich.text
import rich.tree


class ToolkitError(Exception):
    module = "toolkit"


class VolumeError(ToolkitError):
    module = "volume-io"


class BadMagic(VolumeError):
    pass


class CompressedNifti(BadMagic):
    pass


class UnsupportedDatatype(VolumeError):
    pass


class TruncatedData(VolumeError):
    pass


class InvalidHeader(VolumeError):
    pass


class InvalidVolume(VolumeError):
    pass


class EmptyMask(VolumeError):
    pass


class DegenerateMask(VolumeError):
    pass


class MissingFile(VolumeError):
    pass


class TensorError(ToolkitError):
    module = "tensor-autodiff"


class ShapeMismatch(TensorError):
    pass


class LabelOutOfRange(TensorError):
    pass


class CheckpointError(TensorError):
    pass


class NetworkError(ToolkitError):
    module = "dense-fcn"


class InvalidSpec(NetworkError):
    pass


class PatchError(ToolkitError):
    module = "patch-pipeline"


class NoForeground(PatchError):
    pass


class CoverageGap(PatchError):
    pass


class TrainingError(ToolkitError):
    module = "trainer"


class TooFewSubjects(TrainingError):
    pass


class AbsentClass(TrainingError):
    pass


class NonFiniteLoss(TrainingError):
    pass


class PostprocessError(ToolkitError):
    module = "postprocess"


class NotNormalized(PostprocessError):
    pass


class MetricsError(ToolkitError):
    module = "eval-metrics"


class UnknownLabel(MetricsError):
    pass


class MetricsShapeMismatch(MetricsError):
    pass


class RadiomicsError(ToolkitError):
    module = "radiomics"


class EmptyRegion(RadiomicsError):
    pass


class MissingModality(RadiomicsError):
    pass


class SurvivalError(ToolkitError):
    module = "survival"


class TooFewRows(SurvivalError):
    pass


class LengthMismatch(SurvivalError):
    pass


class PhantomError(ToolkitError):
    module = "phantom-data"


class InvalidGeometry(PhantomError):
    pass


@dataclasses.dataclass
class LibError(abc.ABC):
    pass


@dataclasses.dataclass
class ConfigError(LibError):
    context: str
    msg: str
    error: typing.Any = dataclasses.field(default=None)


@dataclasses.dataclass
class IoError(LibError):
    context: str
    msg: str
    error: typing.Any = dataclasses.field(default=None)


@dataclasses.dataclass
class StepError(LibError):
    context: str
    msg: str
    error: typing.Any = dataclasses.field(default=None)


@dataclasses.dataclass
class ParseError(LibError):
    path: str
    msg: str


@dataclasses.dataclass
class SkipError(LibError):
    pass


def from_exception(error: Exception) -> LibError:
    if isinstance(error, ToolkitError):
        return StepError(context=error.module, msg=type(error).__name__, error=error)

    if isinstance(error, OSError):
        return IoError(context="IO", msg=type(error).__name__, error=error)

    return StepError(context="toolkit", msg=type(error).__name__, error=error)


def error_line(error: LibError) -> str:
    """
    Single-line machine readable form of an error, written to stderr on failure.
    """

    if isinstance(error, ParseError):
        payload = {
            "error": "ConfigError",
            "module": "cli",
            "message": f"{error.path} {error.msg}",
        }
    elif isinstance(error, (ConfigError, IoError, StepError)):
        if isinstance(error, ConfigError):
            kind = "ConfigError"
        elif isinstance(error, IoError):
            kind = "IoError"
        elif isinstance(error.error, Exception):
            kind = type(error.error).__name__
        else:
            kind = "StepError"

        message = str(error.error) if error.error is not None else error.msg
        payload = {"error": kind, "module": error.context, "message": message}
    else:
        payload = {"error": type(error).__name__, "module": "cli", "message": ""}

    return json.dumps(payload)


def print_errors(
    errors: typing.Sequence[LibError],
    prefix: typing.Optional[typing.List[str]] = None,
    console: typing.Optional[rich.console.Console] = None,
    elapsed_time: typing.Optional[float] = None,
) -> None:
    if not console:
        safe_console = rich.console.Console()
    else:
        safe_console = console

    if prefix:
        prefix_text = rich.markup.render(
            "[blue]:[/]".join(rich.markup.escape(section) for section in prefix)
        )
    else:
        prefix_text = None

    is_ok = True
    is_skip = False
    if not errors:
        status = "[bold green]OK[/]"
        status_color = "green"
    elif all(isinstance(error, SkipError) for error in errors):
        status = "[bold yellow]SKIP[/]"
        status_color = "yellow"
        is_skip = True
    else:
        status = "[bold red]ERROR[/]"
        status_color = "red"
        is_ok = False

    status_text = rich.markup.render(status)

    if not is_skip and elapsed_time is not None:
        time_text = rich.text.Text(
            str(datetime.timedelta(seconds=max(0, int(elapsed_time)))),
            style=status_color,
        )
    else:
        time_text = None

    header = rich.columns.Columns(
        [v for v in [prefix_text, time_text, status_text] if v]
    )

    if is_ok:
        safe_console.print(header)
        return

    error_tree = rich.tree.Tree(header)

    parse_tree = rich.tree.Tree("[red]config.json[/]")
    config_tree = rich.tree.Tree("[red]Config[/]")
    io_tree = rich.tree.Tree("[red]IO[/]")
    step_tree = rich.tree.Tree("[red]Step[/]")
    subtrees = [parse_tree, config_tree, io_tree, step_tree]

    for error in errors:
        if isinstance(error, ParseError):
            path = rich.markup.escape(error.path)
            msg = rich.markup.escape(error.msg)

            parse_tree.add(f"[red]{path}[/] {msg}")
        elif isinstance(error, (ConfigError, IoError, StepError)):
            if isinstance(error, ConfigError):
                target_tree = config_tree
            elif isinstance(error, IoError):
                target_tree = io_tree
            else:
                target_tree = step_tree

            error_segments: typing.List[rich.console.RenderableType] = [
                rich.markup.render(
                    f"[red]{rich.markup.escape(error.context)}[/] "
                    f"{rich.markup.escape(error.msg)}"
                )
            ]

            if error.error:
                error_segments.append(
                    rich.panel.Panel(
                        rich.markup.render(
                            f"[red]{rich.markup.escape(str(error.error))}[/]"
                        ),
                        title="error",
                        style="red",
                    )
                )

            target_tree.add(rich.console.Group(*error_segments))
        elif isinstance(error, SkipError):
            continue
        else:
            step_tree.add(rich.markup.escape(str(error)))

    for subtree in subtrees:
        if not subtree.children:
            continue

        error_tree.add(subtree)

    safe_console.print(error_tree)


def get_exit_status(errors: typing.Sequence[LibError]) -> bool:
    if not errors:
        return True

    if all(isinstance(error, SkipError) for error in errors):
        return True

    return False

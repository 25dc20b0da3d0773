import dataclasses
import datetime
import json
import os
import os.path
import threading
import time
import typing

import rich.console
import rich.control
import rich.progress

from ..clinical import ClinicalRecord, read_clinical
from ..error import (
    ConfigError,
    IoError,
    LibError,
    SkipError,
    from_exception,
    get_exit_status,
    print_errors,
)
from ..models.run import RunConfig
from ..training import stratified_split
from ..volume import Subject
from ..volume.layout import list_subjects, load_subject


@dataclasses.dataclass(frozen=True)
class CliContext:
    config: RunConfig
    console: typing.Optional[rich.console.Console]
    errors: typing.List[LibError] = dataclasses.field(default_factory=list)


def load_config(
    path: typing.Optional[str], threads: typing.Optional[int] = None
) -> typing.Tuple[typing.Optional[RunConfig], typing.Sequence[LibError]]:
    """
    Built-in defaults when no path is given; ``threads`` overrides the file.
    """

    raw: typing.Dict[str, typing.Any] = {}
    if path is not None:
        if not os.path.isfile(path):
            return None, [IoError(context=path, msg="is not a file")]

        try:
            with open(path) as h:
                raw = json.load(h)
        except Exception as e:
            return None, [ConfigError(context=path, msg="is not valid JSON", error=e)]

        if not isinstance(raw, dict):
            return None, [ConfigError(context=path, msg="is not a JSON object")]

    if threads is not None:
        raw = {**raw, "threads": threads}

    return RunConfig.parse(raw)


def report(
    cli_context: CliContext,
    errors: typing.Sequence[LibError],
    prefix: typing.Optional[typing.List[str]] = None,
    elapsed_time: typing.Optional[float] = None,
) -> bool:
    cli_context.errors.extend(e for e in errors if not isinstance(e, SkipError))
    print_errors(
        errors=errors,
        prefix=prefix,
        console=cli_context.console,
        elapsed_time=elapsed_time,
    )

    return get_exit_status(errors)


def create_run_dir(cli_context: CliContext, command: str) -> str:
    """
    New ``<run_root>/<UTC timestamp>-<command>`` holding the resolved config.
    Existing run directories are never reused.
    """

    config = cli_context.config
    stamp = datetime.datetime.now(datetime.timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    base = os.path.join(config.paths.run_root, f"{stamp}-{command}")

    path, suffix = base, 1
    while os.path.exists(path):
        path = f"{base}.{suffix}"
        suffix += 1

    os.makedirs(path)
    with open(os.path.join(path, "config.json"), "w") as h:
        h.write(config.model_dump_json(indent=2))

    if cli_context.console:
        cli_context.console.print(f"Run directory [blue]{path}[/]")

    return path


def run_step(
    cli_context: CliContext,
    name: str,
    callback: typing.Callable[[], typing.Optional[typing.Sequence[LibError]]],
) -> bool:
    """
    Runs one pipeline step, turning raised errors into reported ones.
    """

    start = time.time()
    try:
        errors = list(callback() or [])
    except Exception as e:
        errors = [from_exception(e)]

    return report(cli_context, errors, [name], time.time() - start)


def _subject_step(
    subject_id: str,
    callback: typing.Callable[[str], typing.Optional[typing.Sequence[LibError]]],
    errors: typing.List[LibError],
) -> None:
    try:
        errors += callback(subject_id) or []
    except Exception as e:
        errors.append(from_exception(e))


def cli_subject_wrapper(
    cli_context: CliContext,
    name: str,
    subject_ids: typing.Sequence[str],
    callback: typing.Callable[[str], typing.Optional[typing.Sequence[LibError]]],
) -> bool:
    """
    Runs ``callback`` per subject on at most ``threads`` worker threads,
    reporting each subject as it finishes.
    """

    console = cli_context.console
    error_map: typing.Dict[str, typing.List[LibError]] = {}
    pending: typing.List[typing.Tuple[threading.Thread, str]] = []
    for subject_id in subject_ids:
        errors: typing.List[LibError] = []
        error_map[subject_id] = errors
        pending.append(
            (
                threading.Thread(
                    target=_subject_step,
                    kwargs={
                        "subject_id": subject_id,
                        "callback": callback,
                        "errors": errors,
                    },
                ),
                subject_id,
            )
        )

    all_errors: typing.List[LibError] = []

    with rich.progress.Progress(
        rich.progress.TextColumn("{task.description}"),
        rich.progress.TimeElapsedColumn(),
        rich.progress.SpinnerColumn(style="progress.elapsed"),
        console=console,
    ) as progress:
        task_ids = {}
        started = {}
        running: typing.List[typing.Tuple[threading.Thread, str]] = []
        while pending or running:
            while pending and len(running) < cli_context.config.threads:
                thread, subject_id = pending.pop(0)
                task_ids[subject_id] = progress.add_task(subject_id)
                started[subject_id] = time.time()
                thread.start()
                running.append((thread, subject_id))

            thread, subject_id = running.pop(0)
            if thread.is_alive():
                running.append((thread, subject_id))
                time.sleep(0.1)
                continue

            errors = error_map[subject_id]
            all_errors += errors

            report(
                cli_context,
                errors,
                prefix=[name, subject_id],
                elapsed_time=time.time() - started[subject_id],
            )
            progress.remove_task(task_ids[subject_id])

    if console and subject_ids:
        console.control(rich.control.Control.move(0, -1))

    return get_exit_status(all_errors)


def clinical_path(config: RunConfig, data_dir: str) -> str:
    return os.path.join(data_dir, config.paths.clinical_file)


def load_clinical(
    config: RunConfig, data_dir: str, path: typing.Optional[str] = None
) -> typing.Dict[str, ClinicalRecord]:
    """
    Clinical records, empty when the default clinical file is absent.
    """

    if path is not None:
        return read_clinical(path)

    default = clinical_path(config, data_dir)
    if not os.path.isfile(default):
        return {}

    return read_clinical(default)


def resolve_subjects(
    data_dir: str, requested: typing.Optional[typing.Sequence[str]]
) -> typing.List[str]:
    if requested:
        return sorted(set(requested))

    return list_subjects(data_dir)


def load_cohort(
    config: RunConfig,
    data_dir: str,
    subject_ids: typing.Sequence[str],
    ground_truth: bool = True,
) -> typing.List[Subject]:
    clinical = load_clinical(config, data_dir)

    return [
        load_subject(
            data_dir,
            subject_id,
            config.paths,
            ground_truth=ground_truth,
            grade=clinical[subject_id].grade if subject_id in clinical else None,
        )
        for subject_id in subject_ids
    ]


def prediction_ids(directory: str, suffix: str) -> typing.List[str]:
    """
    Subject ids of ``<id>_<suffix>.nii`` files in a prediction directory.
    """

    if not os.path.isdir(directory):
        return []

    ending = f"_{suffix}.nii"
    return sorted(
        name[: -len(ending)]
        for name in os.listdir(directory)
        if name.endswith(ending) and len(name) > len(ending)
    )


def write_json(path: str, data: typing.Any) -> None:
    with open(path, "w") as h:
        json.dump(data, h, indent=2)


def split_subjects(
    config: RunConfig, data_dir: str
) -> typing.Tuple[typing.List[str], typing.List[str], typing.List[str]]:
    """
    Grade-stratified train/validation/test ids; subjects without a grade
    form their own stratum.
    """

    clinical = load_clinical(config, data_dir)
    grades = {}
    for subject_id in list_subjects(data_dir):
        record = clinical.get(subject_id)
        grades[subject_id] = (record.grade if record else None) or "unknown"

    return stratified_split(grades, config.train.split, config.seed)

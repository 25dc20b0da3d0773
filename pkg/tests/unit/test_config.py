import json
import math
import os.path
import tempfile

import rich.console

from brats_toolkit.clinical import ClinicalRecord, read_clinical, write_clinical
from brats_toolkit.cmd.cli import CLI
from brats_toolkit.cmd.common import load_config
from brats_toolkit.error import (
    ConfigError,
    IoError,
    NoForeground,
    ParseError,
    SkipError,
    StepError,
    error_line,
    from_exception,
    get_exit_status,
    print_errors,
)
from brats_toolkit.models.run import RunConfig


def test_defaults() -> None:
    config, errors = RunConfig.parse({})

    assert not errors
    assert config is not None
    assert config.patches.size == 64
    assert config.train.lr0 == 1e-4
    assert config.survival.bins.short_mid == 300.0


def test_unknown_key() -> None:
    config, errors = RunConfig.parse({"network": {"growth": 3}})

    assert config is None
    assert isinstance(errors[0], ParseError)
    assert errors[0].path == "network.growth"


def test_patch_network_mismatch() -> None:
    config, errors = RunConfig.parse({"patches": {"size": 12, "infer_stride": 6}})

    assert config is None
    assert errors


def test_invalid_ranges() -> None:
    for data in [
        {"train": {"split": [0.5, 0.2, 0.1]}},
        {"train": {"hard_mining_thresholds": [0.75, 0.6]}},
        {"survival": {"bins": {"short_mid": 450, "mid_long": 300}}},
        {"network": {"layers_per_dense_block": [4, 4]}},
        {"components": {"min_voxels": {"3": 10}}},
        {"threads": 0},
    ]:
        config, errors = RunConfig.parse(data)

        assert config is None, data
        assert all(isinstance(error, ParseError) for error in errors)


def test_echo_round_trip() -> None:
    config, _ = RunConfig.parse({"seed": 11, "train": {"epochs": 2}})
    assert config is not None

    echoed, errors = RunConfig.parse(json.loads(config.model_dump_json()))

    assert not errors
    assert echoed == config


def test_load_config() -> None:
    with tempfile.TemporaryDirectory() as temp_dir:
        missing = os.path.join(temp_dir, "missing.json")
        config, errors = load_config(missing)
        assert config is None
        assert isinstance(errors[0], IoError)

        broken = os.path.join(temp_dir, "broken.json")
        with open(broken, "w") as h:
            h.write("{")
        config, errors = load_config(broken)
        assert config is None
        assert isinstance(errors[0], ConfigError)

        listing = os.path.join(temp_dir, "list.json")
        with open(listing, "w") as h:
            h.write("[]")
        config, errors = load_config(listing)
        assert isinstance(errors[0], ConfigError)

        valid = os.path.join(temp_dir, "config.json")
        with open(valid, "w") as h:
            json.dump({"threads": 2, "seed": 5}, h)
        config, errors = load_config(valid, threads=4)

    assert not errors
    assert config is not None
    assert config.threads == 4
    assert config.seed == 5


def test_from_exception() -> None:
    error = from_exception(NoForeground("subject a has no label map"))

    assert isinstance(error, StepError)
    assert error.context == "patch-pipeline"
    assert json.loads(error_line(error)) == {
        "error": "NoForeground",
        "module": "patch-pipeline",
        "message": "subject a has no label map",
    }

    assert isinstance(from_exception(FileNotFoundError("x")), IoError)
    assert from_exception(ValueError("x")).context == "toolkit"


def test_error_line_parse_error() -> None:
    line = json.loads(error_line(ParseError(path="seed", msg="bad value")))

    assert line["error"] == "ConfigError"
    assert line["message"] == "seed bad value"


def test_error_line_plain_step_error() -> None:
    line = json.loads(error_line(StepError(context="runs/x", msg="is empty")))

    assert line == {"error": "StepError", "module": "runs/x", "message": "is empty"}


def test_exit_status() -> None:
    assert get_exit_status([])
    assert get_exit_status([SkipError()])
    assert not get_exit_status([SkipError(), StepError(context="a", msg="b")])


def test_print_errors() -> None:
    console = rich.console.Console(record=True, width=120)

    print_errors(
        [StepError(context="trainer", msg="NonFiniteLoss")],
        prefix=["train"],
        console=console,
    )

    text = console.export_text()
    assert "ERROR" in text
    assert "NonFiniteLoss" in text


def test_clinical_round_trip() -> None:
    records = [
        ClinicalRecord("a", 61.5, 320.0, "GTR", "HGG"),
        ClinicalRecord("b", 40.25, None, "NA", None),
    ]

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "clinical.csv")
        write_clinical(path, records)
        with open(path) as h:
            text = h.read()
        loaded = read_clinical(path)

    assert "NA" in text
    assert loaded["a"] == records[0]
    assert loaded["b"] == records[1]


def test_clinical_missing_age() -> None:
    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "clinical.csv")
        with open(path, "w") as h:
            h.write("subject_id,age,survival_days,resection_status\n")
            h.write("c,NA,,unknown\n")
        loaded = read_clinical(path)

    assert math.isnan(loaded["c"].age)
    assert loaded["c"].survival_days is None
    assert loaded["c"].resection_status == "NA"


def test_command_table() -> None:
    assert sorted(CLI.options) == [
        "config",
        "doc",
        "evaluate",
        "hard-mine",
        "infer",
        "phantom-gen",
        "postprocess",
        "radiomics",
        "survival-predict",
        "survival-score",
        "survival-train",
        "train",
    ]

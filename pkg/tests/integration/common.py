import glob
import os.path
import typing

import rich.console

from brats_toolkit.cmd.common import CliContext
from brats_toolkit.models.run import RunConfig


def small_config(root: str, **overrides: typing.Any) -> RunConfig:
    raw: typing.Dict[str, typing.Any] = {
        "network": {
            "growth_rate": 2,
            "layers_per_dense_block": [1, 1],
            "num_transition_downs": 1,
            "initial_conv_channels": 4,
        },
        "patches": {"size": 8, "infer_stride": 8, "infer_batch_size": 4},
        "train": {
            "batch_size": 2,
            "epochs": 1,
            "fine_tune_epochs": 1,
            "patches_per_subject": 2,
            "validation_patches": 1,
            "hard_mining_thresholds": [0.9],
        },
        "phantom": {
            "dims": [16, 16, 16],
            "wt_radius": [4.0, 5.0],
            "tc_ratio": [0.6, 0.7],
            "et_ratio": [0.6, 0.7],
            "hgg_fraction": 1.0,
            "seed": 5,
        },
        "radiomics": {"bin_count": 8, "modalities": ["flair", "t1ce"]},
        "survival": {"top_k": 4, "forest": {"n_trees": 5}},
        "paths": {
            "data_dir": os.path.join(root, "data"),
            "run_root": os.path.join(root, "runs"),
        },
        "seed": 3,
        "threads": 1,
    }
    raw.update(overrides)

    return RunConfig.model_validate(raw)


def run_dir(config: RunConfig, command: str) -> str:
    root = config.paths.run_root
    matches = sorted(
        glob.glob(os.path.join(root, f"*-{command}"))
        + glob.glob(os.path.join(root, f"*-{command}.*"))
    )
    assert matches, f"no {command} run directory"

    return matches[-1]


def context(config: RunConfig) -> CliContext:
    return CliContext(config=config, console=rich.console.Console(quiet=True))

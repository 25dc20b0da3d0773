import json
import os.path

import numpy as np
import pandas as pd
import pytest

from brats_toolkit.cmd import (
    evaluate,
    hard_mine,
    infer,
    phantom_gen,
    postprocess,
    train,
)
from brats_toolkit.network import load_state
from brats_toolkit.volume import read_nifti

from .common import context, run_dir, small_config


def segment(workspace: str) -> str:
    config = small_config(workspace)

    assert phantom_gen.cli(phantom_gen.Args(count=4), context(config))
    assert train.cli(train.Args(), context(config))

    train_dir = run_dir(config, "train")
    with open(os.path.join(train_dir, "split.json")) as h:
        split = json.load(h)
    assert len(split["train"]) == 3
    assert len(split["validation"]) == 1

    with open(os.path.join(train_dir, "train_log.jsonl")) as h:
        assert len(h.read().splitlines()) == config.train.epochs

    assert hard_mine.cli(
        hard_mine.Args(checkpoint=os.path.join(train_dir, "model.ckpt")),
        context(config),
    )
    mine_dir = run_dir(config, "hard-mine")
    _, stage = load_state(os.path.join(mine_dir, "model.ckpt"))
    assert stage in ("base", "hard_mining_1")

    assert infer.cli(
        infer.Args(checkpoint=os.path.join(mine_dir, "model.ckpt")),
        context(config),
    )
    infer_dir = run_dir(config, "infer")
    probs = np.stack(
        [
            read_nifti(os.path.join(infer_dir, f"phantom_000_prob{c}.nii")).data
            for c in range(4)
        ]
    )
    assert np.allclose(probs.sum(axis=0), 1.0, atol=1e-5)

    assert postprocess.cli(postprocess.Args(predictions=infer_dir), context(config))
    post_dir = run_dir(config, "postprocess")
    labels = read_nifti(os.path.join(post_dir, "phantom_000_seg.nii")).data
    assert set(np.unique(labels).tolist()) <= {0, 1, 2, 4}

    assert evaluate.cli(evaluate.Args(predictions=post_dir), context(config))

    return os.path.join(run_dir(config, "evaluate"), "metrics.csv")


@pytest.mark.slow
def test_end_to_end(workspace: str) -> None:
    metrics = pd.read_csv(segment(workspace), dtype={"subject_id": str})

    assert len(metrics) == 4
    assert metrics["dsc_wt"].between(0.0, 1.0).all()


@pytest.mark.slow
def test_end_to_end_reproducible(workspace: str) -> None:
    a = pd.read_csv(segment(os.path.join(workspace, "a")))
    b = pd.read_csv(segment(os.path.join(workspace, "b")))

    pd.testing.assert_frame_equal(a, b)

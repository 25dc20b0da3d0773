import os.path
import tempfile
import typing

import numpy as np
import pytest
import rich.console

from brats_toolkit.config import HAUSDORFF_SENTINEL
from brats_toolkit.error import MetricsError, MetricsShapeMismatch, UnknownLabel
from brats_toolkit.metrics import (
    METRIC_COLUMNS,
    MetricsRow,
    Region,
    aggregate,
    boundary,
    dsc,
    hausdorff,
    metrics_row,
    read_metrics_csv,
    region_masks,
    render_aggregate,
    sensitivity,
    specificity,
    write_metrics_csv,
)


def points(
    shape: typing.Tuple[int, ...], *voxels: typing.Tuple[int, ...]
) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    for voxel in voxels:
        mask[voxel] = True

    return mask


def brute_overlap(a: np.ndarray, b: np.ndarray) -> typing.Tuple[float, float, float]:
    both = only_a = only_b = neither = 0
    for p, g in zip(a.reshape(-1).tolist(), b.reshape(-1).tolist()):
        if p and g:
            both += 1
        elif p:
            only_a += 1
        elif g:
            only_b += 1
        else:
            neither += 1

    total = 2 * both + only_a + only_b
    overlap = 1.0 if total == 0 else 2.0 * both / total
    if both + only_b == 0:
        sens = 1.0 if only_a == 0 else 0.0
    else:
        sens = both / (both + only_b)
    spec = 1.0 if only_a + neither == 0 else neither / (only_a + neither)

    return overlap, sens, spec


def brute_boundary(mask: np.ndarray) -> np.ndarray:
    out = np.zeros(mask.shape, dtype=bool)
    for voxel in zip(*np.nonzero(mask)):
        for axis in range(3):
            for step in (-1, 1):
                neighbor = list(voxel)
                neighbor[axis] += step
                inside = 0 <= neighbor[axis] < mask.shape[axis]
                if not inside or not mask[tuple(neighbor)]:
                    out[voxel] = True

    return out


def random_pairs(
    count: int, seed: int
) -> typing.Iterator[typing.Tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        density_a, density_b = rng.uniform(0.02, 0.6, size=2)
        yield (
            rng.uniform(size=(8, 8, 8)) < density_a,
            rng.uniform(size=(8, 8, 8)) < density_b,
        )


def brute_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    pa = np.argwhere(brute_boundary(a)).astype(float)
    pb = np.argwhere(brute_boundary(b)).astype(float)
    distances = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(axis=2))

    return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))


def test_region_masks() -> None:
    labels = np.array([0, 1, 2, 4]).reshape(4, 1, 1)

    masks = {m.region: m.mask.reshape(-1).tolist() for m in region_masks(labels)}

    assert masks[Region.ET] == [False, False, False, True]
    assert masks[Region.TC] == [False, True, False, True]
    assert masks[Region.WT] == [False, True, True, True]


def test_region_masks_trivial() -> None:
    masks = {m.region: m.mask for m in region_masks(np.full((2, 2, 2), 4))}
    assert all(mask.all() for mask in masks.values())

    masks = {m.region: m.mask for m in region_masks(np.ones((2, 2, 2)))}
    assert not masks[Region.ET].any()
    assert masks[Region.TC].all() and masks[Region.WT].all()


def test_region_masks_unknown() -> None:
    with pytest.raises(UnknownLabel):
        region_masks(np.full((2, 2, 2), 3))


def test_overlap() -> None:
    a = points((4, 1, 1), (0, 0, 0), (1, 0, 0))
    b = points((4, 1, 1), (1, 0, 0), (2, 0, 0))

    assert dsc(a, b) == 0.5
    assert sensitivity(a, b) == 0.5
    assert specificity(a, b) == 0.5
    assert dsc(a, a) == sensitivity(a, a) == specificity(a, a) == 1.0


def test_overlap_disjoint() -> None:
    a = points((4, 1, 1), (0, 0, 0))
    b = points((4, 1, 1), (3, 0, 0))

    assert dsc(a, b) == 0.0
    assert sensitivity(a, b) == 0.0


def test_overlap_empty() -> None:
    empty = np.zeros((2, 2, 2), dtype=bool)
    one = points((2, 2, 2), (0, 0, 0))

    assert dsc(empty, empty) == 1.0
    assert sensitivity(empty, empty) == 1.0
    assert sensitivity(one, empty) == 0.0
    assert dsc(one, empty) == 0.0


def test_overlap_shape_mismatch() -> None:
    with pytest.raises(MetricsShapeMismatch):
        dsc(np.zeros((2, 2, 2)), np.zeros((2, 2, 3)))


def test_overlap_brute_force() -> None:
    for a, b in random_pairs(200, seed=0):
        assert (dsc(a, b), sensitivity(a, b), specificity(a, b)) == brute_overlap(a, b)
        assert dsc(a, b) == dsc(b, a)


def test_hausdorff_examples() -> None:
    a = points((8, 1, 1), (0, 0, 0))
    b = points((8, 1, 1), (3, 0, 0))
    assert hausdorff(a, b) == 3.0

    p = points((11, 1, 1), (0, 0, 0), (10, 0, 0))
    g = points((11, 1, 1), (0, 0, 0))
    assert hausdorff(p, g) == 10.0

    assert hausdorff(p, p) == 0.0


def test_hausdorff_spacing() -> None:
    a = points((8, 1, 1), (0, 0, 0))
    b = points((8, 1, 1), (3, 0, 0))

    assert hausdorff(a, b, spacing=(2.0, 1.0, 1.0)) == 6.0


def test_hausdorff_empty() -> None:
    empty = np.zeros((2, 2, 2), dtype=bool)
    one = points((2, 2, 2), (0, 0, 0))

    assert hausdorff(empty, empty) == 0.0
    assert hausdorff(one, empty) == HAUSDORFF_SENTINEL


def test_boundary_brute_force() -> None:
    for a, _ in random_pairs(20, seed=1):
        assert np.array_equal(boundary(a), brute_boundary(a))


def test_hausdorff_brute_force() -> None:
    pairs = list(random_pairs(200, seed=2))

    for a, b in pairs:
        if not a.any() or not b.any():
            continue

        ab = hausdorff(a, b)
        assert ab == pytest.approx(brute_hausdorff(a, b), abs=1e-9)
        assert ab == hausdorff(b, a)

    for (a, b), (c, _) in zip(pairs, pairs[1:]):
        if a.any() and b.any() and c.any():
            assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-9


def test_hausdorff_percentile() -> None:
    p = points((11, 1, 1), *[(i, 0, 0) for i in range(10)])
    g = points((11, 1, 1), *[(i, 0, 0) for i in range(9)], (10, 0, 0))

    assert hausdorff(p, g, percentile=95) <= hausdorff(p, g)


def test_metrics_row() -> None:
    labels = np.zeros((6, 6, 6), dtype=np.uint8)
    labels[1:4, 1:4, 1:4] = 2
    labels[2, 2, 2] = 4

    row = metrics_row("a", labels, labels)

    for region in Region:
        assert row.get("dsc", region) == 1.0
        assert row.get("hd", region) == 0.0
    assert row.mean_dsc() == 1.0


def test_aggregate() -> None:
    rows = [
        MetricsRow("a", {c: 0.6 for c in METRIC_COLUMNS}),
        MetricsRow("b", {c: 0.8 for c in METRIC_COLUMNS}),
        MetricsRow("c", {c: 1.0 for c in METRIC_COLUMNS}),
    ]

    table = aggregate(rows)

    assert table.loc["Mean", "dsc_et"] == pytest.approx(0.8)
    assert table.loc["Median", "dsc_et"] == pytest.approx(0.8)
    assert table.loc["StdDev", "dsc_et"] == pytest.approx(0.1633, abs=1e-4)
    assert np.allclose(aggregate(rows[::-1]).to_numpy(), table.to_numpy())


def test_aggregate_single_row() -> None:
    table = aggregate([MetricsRow("a", {c: 0.7 for c in METRIC_COLUMNS})])

    assert table.loc["StdDev", "hd_wt"] == 0.0
    assert table.loc["Mean", "hd_wt"] == table.loc["Median", "hd_wt"] == 0.7

    with pytest.raises(MetricsError):
        aggregate([])


def test_metrics_csv() -> None:
    rows = [MetricsRow("007", {c: 0.25 for c in METRIC_COLUMNS})]

    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "metrics.csv")
        write_metrics_csv(path, rows)
        loaded = read_metrics_csv(path)

    assert loaded[0].subject_id == "007"
    assert loaded[0].values == rows[0].values


def test_render_aggregate() -> None:
    table = aggregate([MetricsRow("a", {c: 0.5 for c in METRIC_COLUMNS})])
    console = rich.console.Console(record=True, width=200)

    render_aggregate(table, console)

    assert "DSC ET" in console.export_text()

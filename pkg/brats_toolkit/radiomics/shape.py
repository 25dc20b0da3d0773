"""
Voxel based shape descriptors. Surfaces are counted as exposed voxel faces
and diameters are measured between voxel centers.
"""

import typing

import numpy as np
import scipy.spatial
import scipy.spatial.distance

from ..error import EmptyRegion


SHAPE_3D_FEATURES = [
    "Volume",
    "SurfaceArea",
    "SurfaceVolumeRatio",
    "Sphericity",
    "Compactness1",
    "Compactness2",
    "SphericalDisproportion",
    "Maximum3DDiameter",
    "Maximum2DDiameterSlice",
    "Maximum2DDiameterColumn",
    "Maximum2DDiameterRow",
    "MajorAxisLength",
    "MinorAxisLength",
    "LeastAxisLength",
    "Elongation",
    "Flatness",
]

SHAPE_2D_FEATURES = [
    "PixelSurface",
    "Perimeter",
    "PerimeterSurfaceRatio",
    "Circularity",
    "SphericalDisproportion2D",
    "MaximumDiameter2D",
    "MajorAxisLength2D",
    "MinorAxisLength2D",
    "Elongation2D",
    "MeanPixelSurface",
]

SHAPE_FEATURES = SHAPE_3D_FEATURES + SHAPE_2D_FEATURES


def exposed_area(mask: np.ndarray, spacing: typing.Sequence[float]) -> float:
    """
    Total area of voxel faces between the mask and its complement.
    """

    padded = np.pad(mask.astype(np.int8), 1)
    face_areas = [
        spacing[1] * spacing[2],
        spacing[0] * spacing[2],
        spacing[0] * spacing[1],
    ]

    area = 0.0
    for axis, face in enumerate(face_areas):
        area += face * int(np.count_nonzero(np.diff(padded, axis=axis)))

    return area


def max_diameter(points: np.ndarray) -> float:
    """
    Largest distance between two points, searched on the convex hull.
    """

    if len(points) < 2:
        return 0.0

    candidates = points
    if len(points) > points.shape[1] + 1:
        try:
            hull = scipy.spatial.ConvexHull(points, qhull_options="QJ")
            candidates = points[hull.vertices]
        except (scipy.spatial.QhullError, ValueError):
            candidates = points

    return float(scipy.spatial.distance.pdist(candidates).max())


def _planar_diameter(points: np.ndarray, axis: int) -> float:
    """
    Largest diameter among the planes orthogonal to ``axis``.
    """

    best = 0.0
    keep = [a for a in range(3) if a != axis]
    for value in np.unique(points[:, axis]):
        plane = points[points[:, axis] == value][:, keep]
        best = max(best, max_diameter(plane))

    return best


def _axes(points: np.ndarray) -> np.ndarray:
    """
    Principal variances in decreasing order.
    """

    if len(points) < 2:
        return np.zeros(points.shape[1])

    covariance = np.cov(points, rowvar=False, bias=True)
    eigenvalues = np.linalg.eigvalsh(np.atleast_2d(covariance))

    return np.clip(eigenvalues[::-1], 0.0, None)


def _ratio(small: float, large: float) -> float:
    # zero extent counts as isotropic
    if large <= 0:
        return 1.0

    return float(np.sqrt(small / large))


def _perimeter(mask: np.ndarray, spacing: typing.Sequence[float]) -> float:
    padded = np.pad(mask.astype(np.int8), 1)
    # edges crossing x have length spacing[1] and vice versa
    return float(
        spacing[1] * np.count_nonzero(np.diff(padded, axis=0))
        + spacing[0] * np.count_nonzero(np.diff(padded, axis=1))
    )


def shape_features(
    mask: np.ndarray, spacing: typing.Sequence[float] = (1.0, 1.0, 1.0)
) -> typing.Dict[str, float]:
    """
    16 volumetric descriptors plus 10 computed on the axial slice with the
    largest area.
    """

    inside = np.asarray(mask, dtype=np.bool_)
    if not inside.any():
        raise EmptyRegion("shape features need a nonempty mask")

    scale = np.asarray(spacing, dtype=np.float64)
    points = np.argwhere(inside).astype(np.float64) * scale

    volume = float(inside.sum() * np.prod(scale))
    area = exposed_area(inside, spacing)
    lambdas = _axes(points)

    features = {
        "Volume": volume,
        "SurfaceArea": area,
        "SurfaceVolumeRatio": area / volume,
        "Sphericity": float(np.pi ** (1 / 3) * (6 * volume) ** (2 / 3) / area),
        "Compactness1": float(volume / (np.sqrt(np.pi) * area**1.5)),
        "Compactness2": float(36 * np.pi * volume**2 / area**3),
        "SphericalDisproportion": float(area / (36 * np.pi * volume**2) ** (1 / 3)),
        "Maximum3DDiameter": max_diameter(points),
        "Maximum2DDiameterSlice": _planar_diameter(points, 2),
        "Maximum2DDiameterColumn": _planar_diameter(points, 1),
        "Maximum2DDiameterRow": _planar_diameter(points, 0),
        "MajorAxisLength": float(4 * np.sqrt(lambdas[0])),
        "MinorAxisLength": float(4 * np.sqrt(lambdas[1])),
        "LeastAxisLength": float(4 * np.sqrt(lambdas[2])),
        "Elongation": _ratio(lambdas[1], lambdas[0]),
        "Flatness": _ratio(lambdas[2], lambdas[0]),
    }

    per_slice = inside.sum(axis=(0, 1))
    occupied = per_slice[per_slice > 0]
    index = int(np.argmax(per_slice))
    section = inside[:, :, index]
    pixel_area = float(scale[0] * scale[1])

    surface = float(section.sum() * pixel_area)
    perimeter = _perimeter(section, spacing)
    plane_points = np.argwhere(section).astype(np.float64) * scale[:2]
    plane_lambdas = _axes(plane_points)

    features.update(
        {
            "PixelSurface": surface,
            "Perimeter": perimeter,
            "PerimeterSurfaceRatio": perimeter / surface,
            "Circularity": float(2 * np.sqrt(np.pi * surface) / perimeter),
            "SphericalDisproportion2D": float(
                perimeter / (2 * np.sqrt(np.pi * surface))
            ),
            "MaximumDiameter2D": max_diameter(plane_points),
            "MajorAxisLength2D": float(4 * np.sqrt(plane_lambdas[0])),
            "MinorAxisLength2D": float(4 * np.sqrt(plane_lambdas[1])),
            "Elongation2D": _ratio(plane_lambdas[1], plane_lambdas[0]),
            "MeanPixelSurface": float(occupied.mean() * pixel_area),
        }
    )

    return features

"""Group pertinence index (GPI) and the 0-5 confidence level mapping.

GPI measures how far a query vector sits outside the recognized class's
cluster: g = d(a, c) - d(p*, c) with c the class centroid and p* the
stored instance nearest to the query. Negative g means the query lies
deeper inside the cluster than its nearest member; large positive g
flags a likely wrong (or unknown) classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Left-closed interval starts for levels 4..0; g < 0 is level 5.
LEVEL_BOUNDS = ((2.0, 0), (1.5, 1), (1.0, 2), (0.5, 3), (0.0, 4))
UNRECOGNIZED_LEVEL = 0


@dataclass(frozen=True)
class GpiResult:
    g: float
    level: int
    class_name: str
    centroid_distance: float
    nearest_distance: float


def euclidean(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("vectors must have equal length")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def centroid(points) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("need at least one instance")
    return points.mean(axis=0)


def confidence_level(g: float) -> int:
    """Map a GPI value to a confidence level (5 best, 0 = unrecognized)."""
    if not math.isfinite(g):
        raise ValueError(f"GPI must be finite, got {g}")
    if g < 0.0:
        return 5
    for bound, level in LEVEL_BOUNDS:
        if g >= bound:
            return level
    raise AssertionError("unreachable: bounds cover all g >= 0")


def gpi(a, points, class_name: str = "") -> GpiResult:
    """Pertinence of query `a` to the recognized class's instances."""
    a = np.asarray(a, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValueError("recognized class must have at least one instance")
    if points.shape[1] != a.size:
        raise ValueError("query and instances must share dimensionality")
    c = points.mean(axis=0)
    query_dists = np.sqrt(np.sum((points - a) ** 2, axis=1))
    nearest = int(np.argmin(query_dists))  # first minimum = earliest stored
    d_ac = euclidean(a, c)
    d_pc = euclidean(points[nearest], c)
    g = d_ac - d_pc
    return GpiResult(g=g, level=confidence_level(g), class_name=class_name,
                     centroid_distance=d_ac, nearest_distance=d_pc)

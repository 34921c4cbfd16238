"""Quantitative trajectory hallmarks.

MDS (mean directional similarity) is the mean of all n^2 entries of a
cosine map, equivalently the squared norm of the average unit-normalized
trajectory point. The angular and norm measure families are per-step
series over the flattened checkpoints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .ckptstore import SelectionSpec, TrajectoryStore
from .errors import DegenerateVector, InsufficientPoints
from .kernel import EPS_NORM, CosineMap, OriginSpec, relative_trajectory_map


class AngularMeasureKind(enum.Enum):
    # angle(second arg is the reference vector); see _angle_pairs for ranges
    CONSECUTIVE_UPDATES = "consecutive_updates"
    LAGGED_UPDATES = "lagged_updates"
    APEX_AT_INIT = "apex_at_init"
    APEX_AT_ORIGIN = "apex_at_origin"
    UPDATE_VS_POSITION = "update_vs_position"
    UPDATE_VS_TOTAL_DISPLACEMENT = "update_vs_total_displacement"
    PROGRESS_VS_TOTAL_DISPLACEMENT = "progress_vs_total_displacement"
    UPDATE_VS_DISPLACEMENT_FROM_INIT = "update_vs_displacement_from_init"


class NormMeasureKind(enum.Enum):
    PARAM_NORM = "param_norm"
    DIST_FROM_INIT = "dist_from_init"
    UPDATE_NORM = "update_norm"


class Units(enum.Enum):
    DEGREES = "degrees"
    L2NORM = "l2norm"
    DIMENSIONLESS = "dimensionless"


@dataclass
class ScalarSeries:
    measure_id: str
    k: int
    points: list[tuple[int, float]]
    units: Units


@dataclass
class MdsResult:
    omega: float
    origin: OriginSpec
    n: int


def mds(cosmap: CosineMap) -> MdsResult:
    """omega = (1/n^2) * sum of all cosine-map entries, diagonal included."""
    omega = float(np.mean(cosmap.values))
    return MdsResult(omega=omega, origin=cosmap.origin, n=cosmap.n)


def mds_relative(
    store: TrajectoryStore, tau: int, sel: SelectionSpec | None = None, *, threads: int = 1
) -> MdsResult:
    """MDS of the relative trajectory map at tau (omit-row applied)."""
    return mds(relative_trajectory_map(store, tau, sel, threads=threads))


def _angle_pairs(theta: np.ndarray, measure: AngularMeasureKind, k: int):
    """Yield (t, vector_a, vector_b) for every defined step of the measure."""
    last = theta.shape[0] - 1  # index T
    if measure is AngularMeasureKind.CONSECUTIVE_UPDATES:
        for t in range(1, last):
            yield t, theta[t + 1] - theta[t], theta[t] - theta[t - 1]
    elif measure is AngularMeasureKind.LAGGED_UPDATES:
        for t in range(k, last - k + 1):
            yield t, theta[t + k] - theta[t], theta[t] - theta[t - k]
    elif measure is AngularMeasureKind.APEX_AT_INIT:
        for t in range(1, last + 1):
            yield t, theta[t] - theta[0], theta[1] - theta[0]
    elif measure is AngularMeasureKind.APEX_AT_ORIGIN:
        for t in range(0, last + 1):
            yield t, theta[t], theta[0]
    elif measure is AngularMeasureKind.UPDATE_VS_POSITION:
        for t in range(0, last):
            yield t, theta[t + 1] - theta[t], theta[t]
    elif measure is AngularMeasureKind.UPDATE_VS_TOTAL_DISPLACEMENT:
        for t in range(0, last):
            yield t, theta[t + 1] - theta[t], theta[last] - theta[0]
    elif measure is AngularMeasureKind.PROGRESS_VS_TOTAL_DISPLACEMENT:
        for t in range(1, last + 1):
            yield t, theta[t] - theta[0], theta[last] - theta[0]
    elif measure is AngularMeasureKind.UPDATE_VS_DISPLACEMENT_FROM_INIT:
        for t in range(1, last):
            yield t, theta[t + 1] - theta[t], theta[t] - theta[0]
    else:  # pragma: no cover
        raise ValueError(measure)


_MIN_POINTS = {
    AngularMeasureKind.CONSECUTIVE_UPDATES: 3,
    AngularMeasureKind.LAGGED_UPDATES: 3,
    AngularMeasureKind.APEX_AT_INIT: 2,
    AngularMeasureKind.APEX_AT_ORIGIN: 1,
    AngularMeasureKind.UPDATE_VS_POSITION: 2,
    AngularMeasureKind.UPDATE_VS_TOTAL_DISPLACEMENT: 2,
    AngularMeasureKind.PROGRESS_VS_TOTAL_DISPLACEMENT: 2,
    AngularMeasureKind.UPDATE_VS_DISPLACEMENT_FROM_INIT: 3,
}


def angle_degrees(a: np.ndarray, b: np.ndarray) -> float:
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na <= EPS_NORM or nb <= EPS_NORM:
        raise DegenerateVector("zero vector in angle computation")
    c = float(np.dot(a, b)) / (na * nb)
    return math.degrees(math.acos(max(-1.0, min(1.0, c))))


def angular_series(
    store: TrajectoryStore,
    measure: AngularMeasureKind,
    k: int = 1,
    sel: SelectionSpec | None = None,
) -> ScalarSeries:
    if k < 1:
        raise ValueError("lag k must be >= 1")
    need = _MIN_POINTS[measure]
    if measure is AngularMeasureKind.LAGGED_UPDATES:
        need = 2 * k + 1
    if store.n_points < need:
        raise InsufficientPoints(
            f"{measure.value} needs >= {need} checkpoints, store has {store.n_points}"
        )
    theta = store.matrix(sel)
    points = []
    for t, a, b in _angle_pairs(theta, measure, k):
        try:
            points.append((t, angle_degrees(a, b)))
        except DegenerateVector:
            raise DegenerateVector(
                f"{measure.value}: zero vector at t={t} (converged or repeated checkpoint)"
            )
    return ScalarSeries(measure_id=measure.value, k=k, points=points, units=Units.DEGREES)


def norm_series(
    store: TrajectoryStore,
    measure: NormMeasureKind,
    k: int = 1,
    sel: SelectionSpec | None = None,
) -> ScalarSeries:
    if k < 1:
        raise ValueError("lag k must be >= 1")
    theta = store.matrix(sel)
    last = store.n_points - 1
    if measure is NormMeasureKind.PARAM_NORM:
        points = [(t, float(np.linalg.norm(theta[t]))) for t in range(last + 1)]
    elif measure is NormMeasureKind.DIST_FROM_INIT:
        if store.n_points < 2:
            raise InsufficientPoints("dist_from_init needs >= 2 checkpoints")
        points = [(t, float(np.linalg.norm(theta[t] - theta[0]))) for t in range(last + 1)]
    elif measure is NormMeasureKind.UPDATE_NORM:
        if store.n_points < k + 1:
            raise InsufficientPoints(f"update_norm with k={k} needs >= {k + 1} checkpoints")
        points = [
            (t, float(np.linalg.norm(theta[t + k] - theta[t]))) for t in range(last - k + 1)
        ]
    else:  # pragma: no cover
        raise ValueError(measure)
    return ScalarSeries(measure_id=measure.value, k=k, points=points, units=Units.L2NORM)

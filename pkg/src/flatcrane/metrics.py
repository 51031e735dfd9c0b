"""Pareto front container, quality indicators, and cross-run statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ParetoFront:
    """Feasible nondominated (f1, f2) pairs, sorted strictly ascending in f1.

    The constructor sorts and validates: duplicate f1 values and dominated
    members are rejected so downstream indicators can assume a clean front.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        order = np.argsort(pts[:, 0], kind="stable")
        pts = pts[order]
        if pts.shape[0] >= 2:
            if np.any(np.diff(pts[:, 0]) <= 0):
                raise ValueError("front must be strictly increasing in f1")
            if np.any(np.diff(pts[:, 1]) >= 0):
                raise ValueError("front contains dominated members")
        self.points = pts

    def __len__(self) -> int:
        return self.points.shape[0]

    def __iter__(self):
        return iter(self.points)

    @property
    def f1(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def f2(self) -> np.ndarray:
        return self.points[:, 1]


def nondominated(points: np.ndarray) -> np.ndarray:
    """Nondominated subset of (f1, f2) rows with duplicates removed.

    Output rows are strictly increasing in f1 and strictly decreasing in
    f2, so they satisfy the :class:`ParetoFront` invariants.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    cummin = np.minimum.accumulate(pts[:, 1])
    keep = np.ones(pts.shape[0], dtype=bool)
    keep[1:] = pts[1:, 1] < cummin[:-1]
    return pts[keep]


@dataclass(frozen=True)
class Normalization:
    """Per-objective scale divisors applied before computing indicators."""

    f1_scale: float = 1.0
    f2_scale: float = 2.0

    def apply(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) / np.array([self.f1_scale, self.f2_scale])


IDENTITY_SCALE = Normalization(1.0, 1.0)


def hyperarea(front: ParetoFront, ref_point=(1.0, 1.0),
              scale: Normalization = IDENTITY_SCALE) -> float:
    """Area dominated by the normalized front up to the reference point.

    Union of the rectangles [f1, ref1] x [f2, ref2] over front members; all
    normalized members must lie inside the [0, ref] box.
    """
    if len(front) == 0:
        return 0.0
    pts = scale.apply(front.points)
    ref = np.asarray(ref_point, dtype=float)
    if np.any(pts < 0.0) or np.any(pts > ref):
        raise ValueError("normalized front point outside the reference box")
    upper = np.concatenate(([ref[1]], pts[:-1, 1]))
    return float(np.sum((ref[0] - pts[:, 0]) * (upper - pts[:, 1])))


def spacing(front: ParetoFront, scale: Normalization = IDENTITY_SCALE) -> float:
    """Standard deviation of nearest-neighbour Manhattan gaps along the front.

    Zero for fronts with fewer than two members.
    """
    n = len(front)
    if n < 2:
        return 0.0
    pts = scale.apply(front.points)
    diff = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    np.fill_diagonal(diff, np.inf)
    d = diff.min(axis=1)
    return float(np.sqrt(np.sum((d.mean() - d) ** 2) / (n - 1)))


def fe_to_converge(history, ref_point=(1.0, 1.0),
                   scale: Normalization = IDENTITY_SCALE,
                   epsilon: float = 0.01) -> int:
    """Smallest evaluation count whose hyperarea reaches (1 - epsilon) of final.

    ``history`` is a sequence of (evaluation count, front points) pairs in
    chronological order.
    """
    if len(history) == 0:
        raise ValueError("history must be nonempty")
    areas = [hyperarea(ParetoFront(pts), ref_point, scale) for _, pts in history]
    threshold = (1.0 - epsilon) * areas[-1]
    for (fe, _), area in zip(history, areas):
        if area >= threshold:
            return int(fe)
    return int(history[-1][0])


@dataclass(frozen=True)
class RunStats:
    """Sample mean/std and five-number summary across repeated runs."""

    mean: float
    std: float
    q0: float
    q1: float
    q2: float
    q3: float
    q4: float


def aggregate_stats(values) -> RunStats:
    """Mean, sample standard deviation and quartiles of per-run values."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        raise ValueError("need at least two runs to aggregate statistics")
    q = np.percentile(v, [0, 25, 50, 75, 100])
    return RunStats(mean=float(v.mean()), std=float(v.std(ddof=1)),
                    q0=float(q[0]), q1=float(q[1]), q2=float(q[2]),
                    q3=float(q[3]), q4=float(q[4]))

"""Stabilized exponential weighting of locally-minimized samples.

The weighted mean subtracts the minimum value before exponentiating, so the
best sample always carries weight exactly 1 and the computation stays finite
for temperatures down to 1e-12 and below. The shift changes nothing
mathematically: weights depend only on value differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import LARGE_VALUE


@dataclass(frozen=True)
class WeightedSampleSet:
    """Locally-minimized points, their objective values, and a temperature."""

    points: np.ndarray  # (n, d)
    values: np.ndarray  # (n,)
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "points", np.atleast_2d(np.asarray(self.points, dtype=np.float64)))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.points.shape[0] != self.values.shape[0]:
            raise ValueError("points and values must have the same length")
        if self.values.shape[0] == 0:
            raise ValueError("sample set must be nonempty")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample values must be finite")
        if not (self.delta > 0):
            raise ValueError("delta must be positive")


def draw_samples(
    rng: np.random.Generator,
    center: np.ndarray,
    delta: float,
    gamma: float,
    n: int,
) -> np.ndarray:
    """n i.i.d. draws from N(center, delta*gamma*Id), shape (n, d)."""
    if not (delta > 0 and gamma > 0):
        raise ValueError("delta and gamma must be positive")
    if n < 1:
        raise ValueError("need at least one sample")
    center = np.asarray(center, dtype=np.float64)
    scale = math.sqrt(delta * gamma)
    return center + scale * rng.standard_normal((n, center.shape[0]))


def weighted_mean(sample_set: WeightedSampleSet) -> np.ndarray:
    """Softmax-weighted mean with weights exp(-(v_i - v_min)/delta)."""
    shifted = sample_set.values - sample_set.values.min()
    w = np.exp(-shifted / sample_set.delta)
    return (w @ sample_set.points) / w.sum()


def concentration_threshold(
    values: np.ndarray,
    points: np.ndarray,
    basin_radius: float,
) -> float:
    """Largest temperature at which the weighted mean provably lands within
    `basin_radius` of the unique best point.

    Solves exp(-gap/delta) <= r / ((N-1) * max_i ||m_i - m_best||) for delta,
    where gap is the runner-up value margin. Returns the largest finite
    double when the bound is vacuous (right-hand side >= 1), meaning any
    temperature works.
    """
    values = np.asarray(values, dtype=np.float64)
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if values.shape[0] != points.shape[0]:
        raise ValueError("values and points must have the same length")
    if basin_radius <= 0:
        raise ValueError("basin_radius must be positive")
    n = values.shape[0]
    best = int(np.argmin(values))
    others = np.delete(values, best)
    if others.size and others.min() <= values[best]:
        raise ValueError("threshold requires a unique strict minimum value")
    if n == 1:
        return LARGE_VALUE
    max_dist = float(np.max(np.linalg.norm(points - points[best], axis=1)))
    denom = (n - 1) * max_dist
    if denom <= basin_radius:
        return LARGE_VALUE
    gap = float(others.min() - values[best])
    return gap / math.log(denom / basin_radius)

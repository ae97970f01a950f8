#!/usr/bin/env python3
"""
Random geometry of the deployment: axis-parallel walls and power heads.

Walls form two independent 1-D Poisson processes of coordinates (one per
axis); a head at (x, y) is separated from the origin by every x-wall strictly
between 0 and x and every y-wall strictly between 0 and y.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import stats

from .params import SystemParams


@dataclass(frozen=True)
class WallRealization:
    """Sorted wall coordinates on each axis."""
    x_walls: np.ndarray = field(default_factory=lambda: np.empty(0))
    y_walls: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        for name in ("x_walls", "y_walls"):
            walls = np.asarray(getattr(self, name), dtype=float)
            if walls.size > 1 and np.any(np.diff(walls) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, walls)

    def to_dict(self) -> dict:
        return {"x_walls": self.x_walls.tolist(), "y_walls": self.y_walls.tolist()}


@dataclass(frozen=True)
class PhRealization:
    """Power heads in polar form plus the number of walls between each head and the origin."""
    r: np.ndarray
    theta: np.ndarray
    n_walls: np.ndarray

    def __len__(self) -> int:
        return int(self.r.size)

    def to_dict(self) -> dict:
        return {"r": self.r.tolist(), "theta": self.theta.tolist(), "n_walls": self.n_walls.tolist()}


def sample_walls(params: SystemParams, rng: np.random.Generator, margin: float = 0.0) -> WallRealization:
    """
    Draw one wall grid over [-r_d - margin, r_d + margin] on both axes.

    The x axis is drawn before the y axis so a seeded stream always yields the same grid.
    """
    extent = params.r_d + margin
    axes = []
    for _ in range(2):
        count = rng.poisson(params.lambda_w * 2.0 * extent)
        axes.append(np.sort(rng.uniform(-extent, extent, size=count)))
    return WallRealization(*axes)


def sample_phs(params: SystemParams, rng: np.random.Generator):
    """
    Draw the power heads of the disk as (r, theta) arrays.

    The count is Poisson(lambda_ph pi r_d^2); radii follow r_d sqrt(u) so that the
    points are uniform on the disk.
    """
    count = rng.poisson(params.mean_ph_count())
    r = params.r_d * np.sqrt(rng.uniform(size=count))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return r, theta


def _crossings(walls: np.ndarray, coordinate: np.ndarray) -> np.ndarray:
    """Walls strictly between 0 and each coordinate, by binary search."""
    coordinate = np.asarray(coordinate, dtype=float)
    zero_left = np.searchsorted(walls, 0.0, side="left")
    zero_right = np.searchsorted(walls, 0.0, side="right")
    positive = np.searchsorted(walls, coordinate, side="left") - zero_right
    negative = zero_left - np.searchsorted(walls, coordinate, side="right")
    return np.where(coordinate > 0, positive, np.where(coordinate < 0, negative, 0))


def wall_count(walls: WallRealization, x, y):
    """Number of walls crossed by the segment from the origin to (x, y)."""
    count = _crossings(walls.x_walls, x) + _crossings(walls.y_walls, y)
    return int(count) if np.ndim(count) == 0 else count


def place_phs(walls: WallRealization, r: np.ndarray, theta: np.ndarray) -> PhRealization:
    """Attach wall counts to sampled heads."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    counts = wall_count(walls, r * np.cos(theta), r * np.sin(theta))
    return PhRealization(r, theta, np.asarray(counts, dtype=int).reshape(r.shape))


def diagonal_mean(params: SystemParams, r, theta):
    """Mean wall crossings along a ray: lambda_w r (|cos theta| + |sin theta|)."""
    return params.lambda_w * np.asarray(r) * (np.abs(np.cos(theta)) + np.abs(np.sin(theta)))


def blockage_prob(params: SystemParams, n: int, r, theta):
    """Probability that a head at (r, theta) sits behind exactly ``n`` walls."""
    mu = diagonal_mean(params, r, theta)
    if np.ndim(mu) == 0 and mu == 0:
        return 1.0 if n == 0 else 0.0
    value = stats.poisson.pmf(n, mu)
    value = np.where(np.asarray(mu) == 0, float(n == 0), value)
    return float(value) if np.ndim(value) == 0 else value


def thinned_intensity(params: SystemParams, n: int, r, theta):
    """Density of heads behind exactly ``n`` walls at (r, theta)."""
    return params.lambda_ph * blockage_prob(params, n, r, theta)


def crossing_tail(params: SystemParams, n: int) -> float:
    """Chance that the worst-case ray (the disk diagonal) crosses more than ``n`` walls."""
    return float(stats.poisson.sf(n, 2.0 * params.lambda_w * params.r_d))


def default_n_max(params: SystemParams, tail: float = 1e-8) -> int:
    """Smallest wall count whose worst-case crossing tail falls below ``tail`` (at least 1)."""
    mu = 2.0 * params.lambda_w * params.r_d
    n = max(1, int(math.floor(mu)))
    while stats.poisson.sf(n, mu) >= tail:
        n += 1
    return n

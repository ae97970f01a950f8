#!/usr/bin/env python3
"""
End-to-end simulation of the rate and harvested power at the LPD.

Each replication draws, in this order, the wall grid, the power heads, the
serving-link MIMO gain and the interferers' fading, from its own child
stream of the caller's generator.
"""
from dataclasses import dataclass, field
import json
import logging
from typing import IO, Iterable, Optional, Sequence, Tuple

import numpy as np

from utils.errors import InsufficientSamplesError
from .channel import path_loss, sample_fading, sample_mimo_gain
from .geometry import PhRealization, WallRealization, place_phs, sample_phs, sample_walls
from .params import SystemParams

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 100
MIN_BIN_SAMPLES = 500
Z_95 = 1.96


def rate_and_power(params: SystemParams, g0, l0, i_mu):
    """
    Instantaneous rate (bit/s) and harvested power (W):

        R = B_c log2(1 + (P g0 / l0) / (P I + sigma*^2)),  Q = rho xi P (g0 / l0 + I).

    An infinite ``l0`` (no head at all) gives R = Q = 0.
    """
    p = params.p_tx
    g0, l0, i_mu = (np.asarray(a, dtype=float) for a in (g0, l0, i_mu))
    received = np.where(np.isfinite(l0), g0 / np.where(np.isfinite(l0), l0, 1.0), 0.0)
    rate = params.b_c * np.log2(1.0 + p * received / (p * i_mu + params.sigma_star2))
    power = params.rho * params.xi * p * (received + i_mu)
    if rate.ndim == 0:
        return float(rate), float(power)
    return rate, power


@dataclass(frozen=True)
class Replication:
    walls: WallRealization
    phs: PhRealization
    serving_index: int
    l0: float
    g0: float
    i_mu: float
    rate: float
    q_harv: float

    @property
    def is_void(self) -> bool:
        return self.serving_index < 0

    def to_dict(self) -> dict:
        return {"walls": self.walls.to_dict(), "phs": self.phs.to_dict(),
                "serving_index": self.serving_index, "l0": None if self.is_void else self.l0,
                "g0": self.g0, "i_mu": self.i_mu, "rate": self.rate, "q_harv": self.q_harv}


@dataclass(frozen=True)
class ReplicationBatch:
    """Per-replication scalars of a simulation run, as arrays."""
    l0: np.ndarray
    g0: np.ndarray
    i_mu: np.ndarray
    rate: np.ndarray
    q_harv: np.ndarray
    records: Tuple[Replication, ...] = field(default=(), repr=False)

    def __len__(self) -> int:
        return int(self.l0.size)

    @property
    def void_count(self) -> int:
        return int(np.sum(~np.isfinite(self.l0)))

    @classmethod
    def from_replications(cls, replications: Sequence[Replication], keep: bool = False) -> "ReplicationBatch":
        columns = [np.array([getattr(rep, name) for rep in replications], dtype=float)
                   for name in ("l0", "g0", "i_mu", "rate", "q_harv")]
        return cls(*columns, records=tuple(replications) if keep else ())


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous empirical CDF on the sorted sample ``x``."""
    x: np.ndarray
    size: int

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        value = np.searchsorted(self.x, points, side="right") / self.size
        return float(value) if value.ndim == 0 else value

    @property
    def grid(self):
        """(alpha, F) pairs at every jump."""
        finite = self.x[np.isfinite(self.x)]
        return list(zip(finite.tolist(), self(finite).tolist()))

    def sup_distance(self, cdf) -> float:
        """Kolmogorov distance to a CDF callable, checked on both sides of every jump."""
        finite = np.unique(self.x[np.isfinite(self.x)])
        if not finite.size:
            return 0.0
        reference = np.asarray(cdf(finite), dtype=float)
        after = self(finite)
        before = np.searchsorted(self.x, finite, side="left") / self.size
        return float(max(np.max(np.abs(after - reference)), np.max(np.abs(before - reference))))

    @classmethod
    def from_samples(cls, samples) -> "StepFunction":
        samples = np.sort(np.asarray(samples, dtype=float))
        return cls(samples, int(samples.size))


def run_replication(params: SystemParams, rng: np.random.Generator) -> Replication:
    """Simulate one network snapshot."""
    walls = sample_walls(params, rng)
    r, theta = sample_phs(params, rng)
    phs = place_phs(walls, r, theta)
    if len(phs) == 0:
        return Replication(walls, phs, -1, float("inf"), 0.0, 0.0, 0.0, 0.0)

    # a head exactly at the origin has probability zero; keep it finite
    losses = path_loss(params, np.maximum(phs.r, np.finfo(float).tiny), phs.n_walls)
    losses = np.atleast_1d(losses)
    serving = int(np.argmin(losses))
    l0 = float(losses[serving])
    g0 = float(sample_mimo_gain(params.n_t, params.n_r, rng))
    h = np.atleast_1d(sample_fading(rng, size=len(phs)))
    interferers = losses > l0
    i_mu = float(np.sum(h[interferers] / losses[interferers]))
    rate, power = rate_and_power(params, g0, l0, i_mu)
    return Replication(walls, phs, serving, l0, g0, i_mu, rate, power)


def simulate(params: SystemParams, n_reps: int, rng: np.random.Generator, keep: bool = False) -> ReplicationBatch:
    """
    Run ``n_reps`` independent replications, one child stream each.

    Args:
        params: Deployment constants.
        n_reps: Number of replications.
        rng: Parent generator; children come from ``rng.spawn``.
        keep: Also keep the full Replication records (walls and heads).
    """
    if n_reps < 1:
        raise ValueError(f"n_reps must be positive, got {n_reps}")
    replications = [run_replication(params, child) for child in rng.spawn(n_reps)]
    batch = ReplicationBatch.from_replications(replications, keep)
    logger.info("simulated %d replications (%d without any power head)", len(batch), batch.void_count)
    return batch


def _require(n_reps: int):
    if n_reps < MIN_REPLICATIONS:
        raise InsufficientSamplesError(f"need at least {MIN_REPLICATIONS} replications, got {n_reps}")


def proportion(hits: np.ndarray) -> Tuple[float, float]:
    """Fraction of hits and its normal-approximation 95% half-width."""
    n = hits.size
    p = float(np.mean(hits))
    return p, float(Z_95 * np.sqrt(p * (1.0 - p) / n))


def batch_jccdf(batch: ReplicationBatch, r_star: float, q_star: float) -> Tuple[float, float]:
    _require(len(batch))
    return proportion((batch.rate >= r_star) & (batch.q_harv >= q_star))


def batch_rate_ccdf(batch: ReplicationBatch, r_star: float) -> Tuple[float, float]:
    _require(len(batch))
    return proportion(batch.rate >= r_star)


def estimate_jccdf(params: SystemParams, r_star: float, q_star: float, n_reps: int,
                   rng: np.random.Generator) -> Tuple[float, float]:
    """Empirical P{R >= r_star, Q >= q_star} with its 95% half-width."""
    _require(n_reps)
    return batch_jccdf(simulate(params, n_reps, rng), r_star, q_star)


def estimate_rate_ccdf(params: SystemParams, r_star: float, n_reps: int,
                       rng: np.random.Generator) -> Tuple[float, float]:
    """Empirical P{R >= r_star} with its 95% half-width."""
    _require(n_reps)
    return batch_rate_ccdf(simulate(params, n_reps, rng), r_star)


def empirical_min_loss_cdf(params: SystemParams, n_reps: int, rng: np.random.Generator) -> StepFunction:
    """Empirical CDF of the serving path loss; empty disks count as an infinite loss."""
    return StepFunction.from_samples(simulate(params, n_reps, rng).l0)


def stratified_interference_cdf(params: SystemParams, l0_bin: Tuple[float, float], n_reps: int,
                                rng: np.random.Generator, batch: Optional[ReplicationBatch] = None) -> StepFunction:
    """
    Empirical CDF of the interference among replications with L0 in ``l0_bin``.

    Raises:
        InsufficientSamplesError: fewer than 500 replications fell in the bin.
    """
    low, high = l0_bin
    if not low < high:
        raise ValueError(f"empty bin [{low}, {high})")
    if batch is None:
        batch = simulate(params, n_reps, rng)
    inside = (batch.l0 >= low) & (batch.l0 < high)
    count = int(inside.sum())
    if count < MIN_BIN_SAMPLES:
        raise InsufficientSamplesError(
            f"only {count} of {len(batch)} replications have L0 in [{low:.4g}, {high:.4g}); "
            f"widen the bin or add replications (need {MIN_BIN_SAMPLES})")
    return StepFunction.from_samples(batch.i_mu[inside])


def write_jsonl(replications: Iterable[Replication], file: IO[str]):
    """One JSON object per replication and line."""
    count = 0
    for rep in replications:
        file.write(json.dumps(rep.to_dict()) + "\n")
        count += 1
    logger.info("wrote %d replication records", count)

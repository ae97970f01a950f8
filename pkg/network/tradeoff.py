#!/usr/bin/env python3
"""
Rate-energy trade-off curves at a fixed reliability level.

For each rate target the largest harvested-power target still met with
probability ``level`` is found by bisection in dBm; F_c is nonincreasing in
the power target, so the bracket [lo, hi] always keeps F_c(lo) >= level >= F_c(hi).
"""
from dataclasses import dataclass
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from utils.units import dbm_to_watt, watt_to_dbm
from .analysis import TruncationPolicy, get_engine
from .params import SystemParams

logger = logging.getLogger(__name__)

DEFAULT_RATE_GRID = tuple(np.logspace(np.log10(10e3), np.log10(2e6), 40))
BRACKET_DBM = (-60.0, 0.0)
FLOOR_DBM = -120.0
CEILING_DBM = 30.0
XTOL_DB = 0.1
RATE_BOUNDS = (1e2, 1e8)


@dataclass(frozen=True)
class TradeoffPoint:
    r_star: float
    q_star: float
    level: float
    member: Optional[int] = None

    @property
    def q_star_dbm(self) -> float:
        return float(watt_to_dbm(self.q_star))


@dataclass(frozen=True)
class TradeoffCurve:
    """Solved points in increasing rate plus the largest rate meeting ``level`` at all."""
    points: Tuple[TradeoffPoint, ...]
    max_rate: Optional[float] = None

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index) -> TradeoffPoint:
        return self.points[index]


def solve_q_at_rate(params: SystemParams, policy: TruncationPolicy, r_star: float, level: float,
                    engine=None) -> Optional[TradeoffPoint]:
    """
    Largest Q* with F_c(r_star, Q*) >= level, to within 0.1 dB.

    Returns:
        The point, or None when even a vanishing power target misses ``level``.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    engine = engine or get_engine(params, policy)

    def excess(dbm):
        return engine.jccdf(r_star, float(dbm_to_watt(dbm))) - level

    lo, hi = BRACKET_DBM
    while excess(lo) < 0:
        lo, hi = lo - 20.0, lo
        if lo < FLOOR_DBM:
            logger.debug("rate %.4g bit/s cannot reach level %.3g", r_star, level)
            return None
    while excess(hi) > 0:
        lo, hi = hi, hi + 10.0
        if hi > CEILING_DBM:
            raise ValueError(f"F_c stays above {level} up to {CEILING_DBM} dBm at rate {r_star}")
    root = optimize.bisect(excess, lo, hi, xtol=XTOL_DB)
    logger.debug("rate %.4g bit/s: Q* = %.2f dBm (bracket %.1f..%.1f)", r_star, root, lo, hi)
    return TradeoffPoint(float(r_star), float(dbm_to_watt(root)), float(level))


def max_rate(params: SystemParams, policy: TruncationPolicy, level: float, engine=None,
             rtol: float = 1e-3) -> float:
    """Largest rate reached with probability ``level`` when no energy is demanded (0 if none)."""
    engine = engine or get_engine(params, policy)

    def excess(log_rate):
        return engine.rate_ccdf(float(np.exp(log_rate))) - level

    low, high = np.log(RATE_BOUNDS[0]), np.log(RATE_BOUNDS[1])
    if excess(low) < 0:
        return 0.0
    if excess(high) >= 0:
        return float(RATE_BOUNDS[1])
    return float(np.exp(optimize.bisect(excess, low, high, xtol=rtol)))


def tradeoff_curve(params: SystemParams, policy: TruncationPolicy, level: float,
                   rate_grid: Iterable[float] = DEFAULT_RATE_GRID) -> TradeoffCurve:
    """
    Solve every rate of ``rate_grid`` in increasing order.

    Rates beyond the first infeasible one are skipped; the curve records the
    largest achievable rate as its right endpoint.
    """
    engine = get_engine(params, policy)
    points: List[TradeoffPoint] = []
    rates = sorted(float(r) for r in rate_grid)
    if not rates:
        return TradeoffCurve((), None)
    for r_star in rates:
        point = solve_q_at_rate(params, policy, r_star, level, engine)
        if point is None:
            break
        points.append(point)
    ceiling = max_rate(params, policy, level, engine)
    logger.info("trade-off curve: %d of %d rates feasible, max rate %.4g bit/s",
                len(points), len(rates), ceiling)
    return TradeoffCurve(tuple(points), ceiling)


def envelope(params_list: Sequence[SystemParams], policy: TruncationPolicy, level: float,
             rate_grid: Iterable[float] = DEFAULT_RATE_GRID) -> TradeoffCurve:
    """Pointwise largest Q* over several deployments, tagged with the winning member index."""
    rates = sorted(float(r) for r in rate_grid)
    curves = [tradeoff_curve(params, policy, level, rates) for params in params_list]
    best = {}
    for index, curve in enumerate(curves):
        for point in curve:
            current = best.get(point.r_star)
            if current is None or point.q_star > current.q_star:
                best[point.r_star] = TradeoffPoint(point.r_star, point.q_star, point.level, index)
    points = tuple(best[r] for r in rates if r in best)
    ceilings = [curve.max_rate for curve in curves if curve.max_rate is not None]
    return TradeoffCurve(points, max(ceilings) if ceilings else None)

#!/usr/bin/env python3
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from utils.quadrature import QuadControls
from ..geometry import default_n_max
from ..params import SystemParams


@dataclass(frozen=True)
class TruncationPolicy:
    """
    How far the analytic series and integrals are carried.

    Attributes:
        n_max: Largest wall count considered; None picks the smallest count whose
            worst-case crossing tail is below 1e-8.
        eta_tol: Stop an eta-series after three consecutive weights below
            eta_tol times the partial sum.
        eta_cap: Most eta-terms per population before giving up.
        quad: Quadrature tolerances and budgets.
    """
    n_max: Optional[int] = None
    eta_tol: float = 1e-10
    eta_cap: int = 200
    quad: QuadControls = field(default_factory=QuadControls)

    def __post_init__(self):
        if self.n_max is not None and (int(self.n_max) != self.n_max or self.n_max < 1):
            raise ValueError(f"n_max must be a positive integer, got {self.n_max}")
        if not 0.0 < self.eta_tol < 1.0:
            raise ValueError(f"eta_tol must lie in (0, 1), got {self.eta_tol}")
        if self.eta_cap < 8:
            raise ValueError(f"eta_cap must be at least 8, got {self.eta_cap}")

    def resolve_n_max(self, params: SystemParams) -> int:
        return int(self.n_max) if self.n_max is not None else default_n_max(params)


@dataclass(frozen=True)
class ScenarioDerived:
    """
    Quantities derived from a (rate, energy) target pair.

    Attributes:
        sigma_star2: Decoder noise sigma_n^2 + sigma_c^2 / (1 - rho), W.
        q_star: Received power needed at the splitter, Q* / (rho xi), W.
        gamma: Reciprocal SINR threshold 1 / (2^{R*/B_c} - 1).
        t_star: (q_star + sigma_star2) / (gamma + 1), W.
    """
    sigma_star2: float
    q_star: float
    gamma: float
    t_star: float

    @classmethod
    def from_targets(cls, params: SystemParams, r_star: float, q_star_in: float) -> "ScenarioDerived":
        if not r_star > 0:
            raise ValueError(f"rate threshold must be positive, got {r_star}")
        if q_star_in < 0:
            raise ValueError(f"energy threshold must be nonnegative, got {q_star_in}")
        gamma = 1.0 / np.expm1(r_star / params.b_c * np.log(2.0))
        if not np.isfinite(gamma) or gamma <= 0:
            raise ValueError(f"rate threshold {r_star} gives a degenerate SINR target")
        sigma_star2 = params.sigma_star2
        q_star = q_star_in / (params.rho * params.xi)
        return cls(sigma_star2, q_star, float(gamma), (q_star + sigma_star2) / (gamma + 1.0))

    @property
    def sinr_threshold(self) -> float:
        return 1.0 / self.gamma

#!/usr/bin/env python3
import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.units import dbm_to_watt, free_space_kappa, thermal_noise_watt


def ph_density(d_ph: float) -> float:
    """Power-head density for a mean spacing d_ph: one head per disk of radius d_ph."""
    if d_ph <= 0:
        raise ValueError(f"d_ph must be positive, got {d_ph}")
    return 1.0 / (np.pi * d_ph ** 2)


@dataclass(frozen=True)
class SystemParams:
    """
    Physical and network constants of the indoor SWIPT deployment.

    Powers are in Watt, frequencies in Hz, distances in metres. The LPD sits
    at the origin of a disk of radius ``r_d``; power heads form a PPP of
    density ``lambda_ph`` and walls an axis-parallel line process of
    ``lambda_w`` walls per metre on each axis.

    Attributes:
        lambda_ph: Power heads per square metre.
        lambda_w: Walls per metre per axis.
        r_d: Disk radius.
        beta: Path-loss exponent, > 2.
        f_c: Carrier frequency.
        k_pen: Linear per-wall penetration gain in (0, 1).
        p_tx: Transmit power.
        b_c: Bandwidth.
        sigma_n2: Thermal noise variance.
        sigma_c2: RF-to-baseband conversion noise variance.
        rho: Power splitting ratio (share sent to the harvester).
        xi: Harvesting efficiency.
        n_t: Transmit antennas per power head.
        n_r: Receive antennas at the LPD.
    """
    lambda_ph: float
    lambda_w: float
    r_d: float = 60.0
    beta: float = 2.5
    f_c: float = 2.1e9
    k_pen: float = 0.1
    p_tx: float = 1.0
    b_c: float = 200e3
    sigma_n2: float = thermal_noise_watt(200e3, 10.0)
    sigma_c2: float = float(dbm_to_watt(-70.0))
    rho: float = 0.5
    xi: float = 0.8
    n_t: int = 4
    n_r: int = 2

    def __post_init__(self):
        if self.lambda_ph < 0:
            raise ValueError(f"lambda_ph must be nonnegative, got {self.lambda_ph}")
        if self.lambda_w < 0:
            raise ValueError(f"lambda_w must be nonnegative, got {self.lambda_w}")
        if self.r_d <= 0:
            raise ValueError(f"r_d must be positive, got {self.r_d}")
        if self.beta <= 2:
            raise ValueError(f"beta must exceed 2, got {self.beta}")
        if self.f_c <= 0 or self.p_tx <= 0 or self.b_c <= 0:
            raise ValueError("f_c, p_tx and b_c must be positive")
        if not 0.0 < self.k_pen < 1.0:
            raise ValueError(f"k_pen must lie in (0, 1), got {self.k_pen}")
        if self.sigma_n2 <= 0 or self.sigma_c2 <= 0:
            raise ValueError("noise variances must be positive")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie strictly inside (0, 1), got {self.rho}")
        if not 0.0 < self.xi <= 1.0:
            raise ValueError(f"xi must lie in (0, 1], got {self.xi}")
        if int(self.n_t) != self.n_t or int(self.n_r) != self.n_r or self.n_t < 1 or self.n_r < 1:
            raise ValueError(f"antenna counts must be positive integers, got n_t={self.n_t}, n_r={self.n_r}")

    @classmethod
    def default(cls, d_ph: float = 5.0, lambda_w: float = 0.05, **overrides) -> "SystemParams":
        """The reference indoor profile (P = 30 dBm, 200 kHz at 2.1 GHz, 4x2 antennas)."""
        if "lambda_ph" not in overrides:
            overrides["lambda_ph"] = ph_density(d_ph)
        return cls(lambda_w=lambda_w, **overrides)

    def replace(self, d_ph: Optional[float] = None, **changes) -> "SystemParams":
        """Copy with some fields changed; ``d_ph`` is accepted in place of ``lambda_ph``."""
        if d_ph is not None:
            changes["lambda_ph"] = ph_density(d_ph)
        return dataclasses.replace(self, **changes)

    @property
    def d_ph(self) -> float:
        return float(np.inf) if self.lambda_ph == 0 else float(np.sqrt(1.0 / (np.pi * self.lambda_ph)))

    @property
    def kappa(self) -> float:
        return free_space_kappa(self.f_c)

    @property
    def sigma_star2(self) -> float:
        """Noise seen by the decoder: sigma_n^2 + sigma_c^2 / (1 - rho)."""
        return self.sigma_n2 + self.sigma_c2 / (1.0 - self.rho)

    @property
    def m_antennas(self) -> int:
        return int(min(self.n_t, self.n_r))

    @property
    def n_antennas(self) -> int:
        return int(max(self.n_t, self.n_r))

    def loss_ceiling(self, n_walls: int) -> float:
        """Largest path loss of a head behind ``n_walls`` walls: r_d^beta kappa / K^N."""
        return self.r_d ** self.beta * self.kappa / self.k_pen ** n_walls

    def mean_ph_count(self) -> float:
        return self.lambda_ph * np.pi * self.r_d ** 2

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

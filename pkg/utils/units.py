#!/usr/bin/env python3
"""Unit conversions used at the command-line surface and by the default profile."""
import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
THERMAL_NOISE_DBM_PER_HZ = -174.0


def dbm_to_watt(dbm):
    """Power in dBm to Watt."""
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


def watt_to_dbm(watt):
    """Power in Watt to dBm. Zero maps to -inf."""
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(watt, dtype=float)) + 30.0


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def kbps_to_bps(kbps):
    return np.asarray(kbps, dtype=float) * 1e3


def bps_to_kbps(bps):
    return np.asarray(bps, dtype=float) / 1e3


def free_space_kappa(f_c: float) -> float:
    """Path-loss constant (4 pi f_c / c0)^2 at one metre."""
    if f_c <= 0:
        raise ValueError(f"carrier frequency must be positive, got {f_c}")
    return (4.0 * np.pi * f_c / SPEED_OF_LIGHT) ** 2


def thermal_noise_watt(bandwidth: float, noise_figure_db: float = 10.0) -> float:
    """kTB noise plus receiver noise figure: -174 dBm/Hz + 10 log10(B) + NF."""
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return float(dbm_to_watt(THERMAL_NOISE_DBM_PER_HZ + 10.0 * np.log10(bandwidth) + noise_figure_db))

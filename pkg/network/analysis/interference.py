#!/usr/bin/env python3
from threading import Lock
from typing import Dict

import numpy as np

from utils.quadrature import FilonCdf, gil_pelaez_cdf

# conditional laws kept per engine before the cache is flushed
CDF_CACHE_SIZE = 4096


class InterferenceMixin():
    """
    Conditional multi-user interference given the serving path loss.

    Mixed into a loss process; relies on ``cf_log``, ``intensity``,
    ``population_mass``, ``mean_interference`` and ``active_populations``.
    The probability that no head interferes at all is split off as an atom
    at zero before any inversion.

    Conditional laws are cached per serving loss. The cache is guarded by a
    lock and its entries are never mutated, so one engine may serve several
    threads.
    """
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._cdf_cache: Dict[float, FilonCdf] = {}
        self._cdf_lock = Lock()

    def interference_log_cf(self, omega, l0: float) -> np.ndarray:
        """log Phi(omega; l0), the sum of the per-population exponents."""
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        total = np.zeros(omega.shape, dtype=complex)
        for n in self.active_populations():
            if self.active(n, l0):
                total = total + self.cf_log(n, omega, l0)
        return total

    def interference_cf(self, omega, l0: float):
        omega = np.asarray(omega, dtype=float)
        value = np.exp(self.interference_log_cf(omega.ravel(), l0)).reshape(omega.shape)
        return complex(value) if value.ndim == 0 else value

    def interferer_void_probability(self, l0: float) -> float:
        """P{no head with path loss above l0}, the limit of Phi(omega; l0) for large omega."""
        exponent = 0.0
        for n in self.active_populations():
            if self.active(n, l0):
                exponent += self.population_mass(n) - float(self.intensity(n, l0))
        return float(np.exp(-max(exponent, 0.0)))

    def inversion_scale(self, l0: float) -> float:
        """Size of the interference used to size inversion panels: max(E[I | l0], 1 / l0)."""
        return max(self.mean_interference(l0), 1.0 / l0)

    def decay_frequency(self, l0: float) -> float:
        """
        Frequency at which every interferer is resolved: the largest loss ceiling still active.

        |Phi(omega; l0)| only approaches its atom once omega passes the path
        losses of most interferers, whatever the serving loss.
        """
        ceilings = [self.threshold(n) for n in self.active_populations() if self.active(n, l0)]
        return max(ceilings, default=float(l0))

    def interference_cdf(self, z: float, l0: float) -> float:
        """
        P{I <= z | L0 = l0} by marching Gil-Pelaez panels.

        Raises:
            ValueError: l0 is not positive.
            InversionError: the characteristic function did not decay in time.
        """
        if l0 <= 0:
            raise ValueError(f"l0 must be positive, got {l0}")
        if z < 0:
            return 0.0
        atom = self.interferer_void_probability(l0)
        if atom >= 1.0:
            return 1.0

        def cf(omega):
            return np.exp(self.interference_log_cf(omega, l0))

        return gil_pelaez_cdf(cf, float(z), self.inversion_scale(l0), atom, self.policy.quad)

    def conditional_cdf(self, l0: float) -> FilonCdf:
        """
        The whole conditional interference CDF at ``l0`` as a reusable callable (cached).

        Panels start at ``l0``, the distance of the nearest branch point of the
        exponent, and double until the characteristic function has decayed.
        """
        key = float(l0)
        with self._cdf_lock:
            cached = self._cdf_cache.get(key)
        if cached is not None:
            return cached
        atom = self.interferer_void_probability(key)
        law = FilonCdf(lambda omega: self.interference_log_cf(omega, key), atom, key, self.policy.quad,
                       reach=self.decay_frequency(key))
        with self._cdf_lock:
            if len(self._cdf_cache) >= CDF_CACHE_SIZE:
                self.logger.debug("flushing %d cached interference laws", len(self._cdf_cache))
                self._cdf_cache.clear()
            return self._cdf_cache.setdefault(key, law)

    def interference_cdf_curve(self, z, l0: float) -> np.ndarray:
        """P{I <= z | L0 = l0} on a grid of ``z`` through the cached conditional law."""
        if l0 <= 0:
            raise ValueError(f"l0 must be positive, got {l0}")
        return self.conditional_cdf(l0)(np.asarray(z, dtype=float))

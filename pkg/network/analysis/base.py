#!/usr/bin/env python3
from abc import ABC, abstractmethod
import logging
from typing import List

import numpy as np

from utils.quadrature import composite_rule
from ..params import SystemParams
from .policy import TruncationPolicy

# widest panel, in log(alpha), of the direct interference-exponent quadrature
LOG_PANEL = 0.25


class BaseLossProcess(ABC):
    """
    Path losses of the power heads, split by the number of walls in the way.

    Heads behind N walls have path losses forming a Poisson process on
    [0, r_d^beta kappa / K^N] with mean measure Lambda_N([0, alpha]).
    Subclasses provide Lambda_N and its derivative; everything else
    (the minimum-loss law, interference exponents, characteristic functions)
    is built on those two.
    """
    def __init__(self, params: SystemParams, policy: TruncationPolicy = TruncationPolicy()):
        """
        Args:
            params: Deployment constants.
            policy: Truncation and quadrature controls.
        """
        self.params = params
        self.policy = policy
        self.n_max = policy.resolve_n_max(params)
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def intensity(self, n: int, alpha):
        """
        Mean number of heads behind ``n`` walls with path loss in [0, alpha].

        Args:
            n: Wall count.
            alpha: Path loss (scalar or array).

        Returns:
            Lambda_n([0, alpha]), same shape as ``alpha``.
        """
        raise NotImplementedError("Subclass must implement abstract method")

    @abstractmethod
    def intensity_derivative(self, n: int, alpha):
        """d Lambda_n([0, alpha]) / d alpha, zero beyond the loss ceiling."""
        raise NotImplementedError("Subclass must implement abstract method")

    def threshold(self, n: int) -> float:
        return self.params.loss_ceiling(n)

    def populations(self) -> List[int]:
        return list(range(self.n_max + 1))

    def active_populations(self) -> List[int]:
        return self.populations()

    def population_mass(self, n: int) -> float:
        """Mean number of heads behind exactly ``n`` walls."""
        return float(self.intensity(n, self.threshold(n)))

    def total_intensity(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        total = np.zeros(alpha.shape)
        for n in self.populations():
            total = total + self.intensity(n, alpha)
        return float(total) if total.ndim == 0 else total

    def total_intensity_derivative(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        total = np.zeros(alpha.shape)
        for n in self.populations():
            total = total + self.intensity_derivative(n, alpha)
        return float(total) if total.ndim == 0 else total

    def min_loss_cdf(self, alpha):
        """P{L0 <= alpha} = 1 - exp(-sum_n Lambda_n([0, alpha]))."""
        value = -np.expm1(-np.asarray(self.total_intensity(alpha)))
        return float(value) if np.ndim(value) == 0 else value

    def min_loss_density(self, alpha):
        value = (np.asarray(self.total_intensity_derivative(alpha))
                 * np.exp(-np.asarray(self.total_intensity(alpha))))
        return float(value) if np.ndim(value) == 0 else value

    def coverage_void_probability(self) -> float:
        """Probability that the disk holds no power head at all."""
        return float(np.exp(-sum(self.population_mass(n) for n in self.populations())))

    def active(self, n: int, l0: float) -> bool:
        """Whether heads behind ``n`` walls can be louder-than-nothing interferers given L0 = l0."""
        return l0 < self.threshold(n)

    def pgfl_exponent(self, n: int, omega, l0: float):
        """
        log E[exp(j omega I_n) | L0 = l0] by direct quadrature.

        Heads behind ``n`` walls with loss above ``l0`` interfere with unit-mean
        exponential gains, so the exponent is

            int_{l0}^{ceiling} j omega / (alpha - j omega) dLambda_n(alpha),

        integrated over log(alpha) on Gauss-Legendre panels.
        """
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        ceiling = self.threshold(n)
        if l0 >= ceiling:
            return np.zeros(omega.shape, dtype=complex)
        low, high = np.log(l0), np.log(ceiling)
        edges = np.linspace(low, high, max(1, int(np.ceil((high - low) / LOG_PANEL))) + 1)
        s, w = composite_rule(edges)
        alpha = np.exp(s)
        density = self.intensity_derivative(n, alpha) * alpha
        kernel = 1j * omega[:, None] / (alpha[None, :] - 1j * omega[:, None])
        return kernel @ (w * density)

    def cf_log(self, n: int, omega, l0: float):
        """log Phi_n(omega; l0); the direct quadrature unless a subclass knows better."""
        return self.pgfl_exponent(n, omega, l0)

    def cf_phi_n(self, n: int, omega, l0: float):
        """Characteristic function of the interference from heads behind ``n`` walls."""
        omega = np.asarray(omega, dtype=float)
        if not self.active(n, l0):
            value = np.ones(omega.shape, dtype=complex)
        else:
            value = np.exp(self.cf_log(n, omega.ravel(), l0)).reshape(omega.shape)
        return complex(value) if value.ndim == 0 else value

    def mean_interference(self, l0: float) -> float:
        """E[I | L0 = l0] = sum_n int_{l0} dLambda_n(alpha) / alpha (numerically)."""
        total = 0.0
        for n in self.populations():
            ceiling = self.threshold(n)
            if l0 >= ceiling:
                continue
            low, high = np.log(l0), np.log(ceiling)
            edges = np.linspace(low, high, max(1, int(np.ceil((high - low) / LOG_PANEL))) + 1)
            s, w = composite_rule(edges)
            total += float(w @ self.intensity_derivative(n, np.exp(s)))
        return total

#!/usr/bin/env python3
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy import special

from utils.errors import RangeError, TruncationError
from utils.quadrature import composite_rule
from utils.specfun import INTEGER_GUARD, chi_bracket, hyp2f1_interference_split
from .base import BaseLossProcess
from .policy import TruncationPolicy
from ..params import SystemParams

# consecutive negligible eta-terms that end a series
QUIET_TERMS = 3


@dataclass(frozen=True)
class PopulationWeights:
    """
    Truncated eta-series of one wall-count population.

    Lambda_n([0, alpha]) = sum_eta weights[eta] * (alpha / ceiling)^orders[eta],
    i.e. the series coefficients already multiplied by r_d^(eta + 2).
    """
    n: int
    eta: np.ndarray
    weights: np.ndarray
    orders: np.ndarray
    ceiling: float

    @property
    def mass(self) -> float:
        return max(float(self.weights.sum()), 0.0)

    def __len__(self) -> int:
        return int(self.eta.size)


class SeriesLossProcess(BaseLossProcess):
    """
    Path-loss intensities from the alternating eta-series.

    Lambda_n([0, alpha]) = 4 lambda_ph / n! sum_{eta >= n} (-1)^(eta - n) chi_eta
                           / ((eta - n)! (eta + 2)) * rho(alpha)^(eta + 2),

    rho(alpha) = min((alpha K^n / kappa)^(1 / beta), r_d). Coefficients are
    formed in log space and truncated per population when three consecutive
    terms fall below ``policy.eta_tol`` of the partial sum.
    """
    def __init__(self, params: SystemParams, policy: TruncationPolicy = TruncationPolicy()):
        super().__init__(params, policy)
        self._weights: Dict[int, PopulationWeights] = {}
        brackets = np.asarray(chi_bracket(np.arange(self.n_max + policy.eta_cap + 1)), dtype=float)
        self._log_brackets = np.log(brackets)
        for n in self.populations():
            self._weights[n] = self._build_weights(n)

        masses = np.array([self._weights[n].mass for n in self.populations()])
        total = masses.sum()
        self._active = [n for n, mass in zip(self.populations(), masses) if mass > policy.eta_tol * total]
        self.logger.debug("eta-series lengths %s, active populations %s",
                          [len(self._weights[n]) for n in self.populations()], self._active)

    def _build_weights(self, n: int) -> PopulationWeights:
        params = self.params
        ceiling = self.threshold(n)
        empty = np.empty(0)
        if params.lambda_ph == 0 or (params.lambda_w == 0 and n > 0):
            return PopulationWeights(n, empty.astype(int), empty, empty, ceiling)
        if params.lambda_w == 0:
            weight = params.lambda_ph * np.pi * params.r_d ** 2
            return PopulationWeights(0, np.array([0]), np.array([weight]), np.array([2.0 / params.beta]), ceiling)

        k = np.arange(self.policy.eta_cap)
        eta = n + k
        log_weights = (np.log(4.0 * params.lambda_ph) - special.gammaln(n + 1)
                       + eta * np.log(params.lambda_w) + self._log_brackets[eta]
                       - special.gammaln(k + 1) - np.log(eta + 2.0) + (eta + 2.0) * np.log(params.r_d))
        if np.any(log_weights > 700):
            raise RangeError(f"eta-series weights for n={n} overflow")
        weights = np.where(k % 2 == 0, 1.0, -1.0) * np.exp(log_weights)

        partial = np.cumsum(weights)
        quiet = np.abs(weights) <= self.policy.eta_tol * np.abs(partial)
        runs = np.convolve(quiet.astype(int), np.ones(QUIET_TERMS, dtype=int), mode="full")[:quiet.size]
        hits = np.flatnonzero(runs >= QUIET_TERMS)
        if hits.size == 0:
            raise TruncationError(f"eta-series for n={n} did not settle within {self.policy.eta_cap} terms",
                                  terms=self.policy.eta_cap)
        stop = int(hits[0]) + 1
        return PopulationWeights(n, eta[:stop], weights[:stop], (eta[:stop] + 2.0) / params.beta, ceiling)

    def weights(self, n: int) -> PopulationWeights:
        return self._weights[n]

    def active_populations(self):
        """Populations carrying more than eta_tol of the head mass."""
        return list(self._active)

    def population_mass(self, n: int) -> float:
        return self._weights[n].mass

    def intensity(self, n: int, alpha):
        alpha = np.asarray(alpha, dtype=float)
        pop = self._weights[n]
        if not len(pop):
            value = np.zeros(alpha.shape)
        else:
            ratio = np.clip(alpha / pop.ceiling, 0.0, 1.0)
            value = np.maximum(ratio[..., None] ** pop.orders @ pop.weights, 0.0)
            value = np.where(alpha > 0, value, 0.0)
        return float(value) if value.ndim == 0 else value

    def intensity_derivative(self, n: int, alpha):
        alpha = np.asarray(alpha, dtype=float)
        pop = self._weights[n]
        if not len(pop):
            value = np.zeros(alpha.shape)
        else:
            inside = (alpha > 0) & (alpha < pop.ceiling)
            safe = np.where(inside, alpha, pop.ceiling)
            ratio = safe / pop.ceiling
            value = (ratio[..., None] ** pop.orders @ (pop.weights * pop.orders)) / safe
            value = np.where(inside, np.maximum(value, 0.0), 0.0)
        return float(value) if value.ndim == 0 else value

    def scaled_delta(self, orders, omega, l0: float, ceiling: float) -> np.ndarray:
        """
        Delta / r_d^(eta + 2) for every (omega, order) pair.

        With z1 = j omega / l0, z2 = j omega / ceiling and F = 2F1(1, -v; 1 - v; .):

            (l0 / ceiling)^v (1 - F(z1)) - (1 - F(z2)).

        The (-z)^v growth of the two continued 2F1 values is cancelled
        analytically. Orders within INTEGER_GUARD of an integer are integrated
        directly instead.

        Returns:
            Complex array of shape (len(omega), len(orders)).
        """
        orders = np.atleast_1d(np.asarray(orders, dtype=float))
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        out = np.zeros((omega.size, orders.size), dtype=complex)
        integer = np.abs(orders - np.round(orders)) < INTEGER_GUARD
        regular = ~integer & (orders > 0)

        if np.any(regular):
            v = orders[regular][None, :]
            z1 = (1j * omega / l0)[:, None]
            z2 = (1j * omega / ceiling)[:, None]
            singular1, part1 = hyp2f1_interference_split(v, z1)
            singular2, part2 = hyp2f1_interference_split(v, z2)
            growth = np.pi * v / np.sin(np.pi * v) * np.power(-z2, v)
            ratio = (l0 / ceiling) ** v
            out[:, regular] = (ratio * (1.0 - part1) - (1.0 - part2)
                               - growth * (singular1.astype(float) - singular2.astype(float)))
        if np.any(integer):
            out[:, integer] = self._delta_quadrature(orders[integer], omega, l0, ceiling)
        return out

    @staticmethod
    def _delta_quadrature(orders: np.ndarray, omega: np.ndarray, l0: float, ceiling: float) -> np.ndarray:
        """v int_{log l0}^{log ceiling} (alpha / ceiling)^v j omega / (alpha - j omega) d log(alpha)."""
        low, high = np.log(l0), np.log(ceiling)
        out = np.empty((omega.size, orders.size), dtype=complex)
        for index, v in enumerate(orders):
            width = min(1.0, 4.0 / v)
            edges = np.linspace(low, high, max(1, int(np.ceil((high - low) / width))) + 1)
            s, w = composite_rule(edges)
            alpha = np.exp(s)
            kernel = 1j * omega[:, None] / (alpha[None, :] - 1j * omega[:, None])
            out[:, index] = v * (kernel @ (w * np.exp(v * (s - high))))
        return out

    def delta(self, eta: int, n: int, omega, l0: float):
        """
        The interference kernel of one (eta, n) pair:

            rho_l0^(eta+2) (1 - F(j omega / l0)) - r_d^(eta+2) (1 - F(j omega / ceiling)).

        Raises:
            ValueError: eta < n or l0 at or above the ceiling of population n.
            RangeError: r_d^(eta + 2) overflows.
        """
        if eta < n:
            raise ValueError(f"eta={eta} must be at least n={n}")
        ceiling = self.threshold(n)
        if not 0 < l0 < ceiling:
            raise ValueError(f"l0={l0} must lie in (0, {ceiling:.6g}) for n={n}")
        scale = self.params.r_d ** (eta + 2.0)
        if not np.isfinite(scale):
            raise RangeError(f"r_d^{eta + 2} overflows")
        omega = np.asarray(omega, dtype=float)
        value = scale * self.scaled_delta([(eta + 2.0) / self.params.beta], omega.ravel(), l0, ceiling)[:, 0]
        value = value.reshape(omega.shape)
        return complex(value) if value.ndim == 0 else value

    def cf_log(self, n: int, omega, l0: float):
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        pop = self._weights[n]
        if not len(pop) or l0 >= pop.ceiling:
            return np.zeros(omega.shape, dtype=complex)
        return self.scaled_delta(pop.orders, omega, l0, pop.ceiling) @ pop.weights

    def mean_interference(self, l0: float) -> float:
        """
        E[I | L0 = l0] in closed form:

            sum_n sum_eta W v / ceiling * (1 - (l0 / ceiling)^(v - 1)) / (v - 1),

        with the v = 1 terms read as log(ceiling / l0).
        """
        total = 0.0
        for n in self._active:
            pop = self._weights[n]
            if l0 >= pop.ceiling:
                continue
            log_ratio = np.log(l0 / pop.ceiling)
            shift = pop.orders - 1.0
            flat = np.abs(shift) < 1e-12
            safe = np.where(flat, 1.0, shift)
            factor = np.where(flat, -log_ratio, -np.expm1(shift * log_ratio) / safe)
            total += float(np.sum(pop.weights * pop.orders * factor)) / pop.ceiling
        return max(total, 0.0)

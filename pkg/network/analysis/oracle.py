#!/usr/bin/env python3
import numpy as np
from scipy import special, stats

from utils.quadrature import composite_rule
from .base import BaseLossProcess
from .policy import TruncationPolicy
from ..params import SystemParams

# Gauss-Legendre panels over the quarter turn [0, pi/2]
ANGLE_PANELS = 4


class QuadratureLossProcess(BaseLossProcess):
    """
    Path-loss intensities integrated over the bearing instead of summed in eta.

    For a head at bearing theta the crossings are Poisson with mean
    lambda_w r m(theta), m = |cos| + |sin|, so

        Lambda_n([0, alpha]) = lambda_ph (n + 1) 4 int_0^{pi/2} P(n + 2, c rho) / c^2 dtheta,

    with c = lambda_w m(theta), rho = min((alpha K^n / kappa)^(1/beta), r_d) and P
    the regularised lower incomplete gamma function. Independent of the
    eta-series, this is the reference the series is checked against.
    """
    def __init__(self, params: SystemParams, policy: TruncationPolicy = TruncationPolicy()):
        super().__init__(params, policy)
        edges = np.linspace(0.0, 0.5 * np.pi, ANGLE_PANELS + 1)
        self._theta, self._theta_weights = composite_rule(edges)
        self._rate = params.lambda_w * (np.cos(self._theta) + np.sin(self._theta))

    def _radius(self, n: int, alpha: np.ndarray) -> np.ndarray:
        ratio = np.clip(alpha / self.threshold(n), 0.0, 1.0)
        return self.params.r_d * ratio ** (1.0 / self.params.beta)

    def intensity(self, n: int, alpha):
        alpha = np.asarray(alpha, dtype=float)
        rho = self._radius(n, alpha)
        lam = self.params.lambda_ph
        if self.params.lambda_w == 0:
            value = lam * np.pi * rho ** 2 if n == 0 else np.zeros(alpha.shape)
        else:
            c = self._rate
            inner = special.gammainc(n + 2, c * rho[..., None]) / c ** 2
            value = lam * (n + 1) * 4.0 * (inner @ self._theta_weights)
        value = np.where(alpha > 0, value, 0.0)
        return float(value) if value.ndim == 0 else value

    def intensity_derivative(self, n: int, alpha):
        alpha = np.asarray(alpha, dtype=float)
        inside = (alpha > 0) & (alpha < self.threshold(n))
        safe = np.where(inside, alpha, 1.0)
        rho = self._radius(n, safe)
        lam = self.params.lambda_ph
        if self.params.lambda_w == 0:
            angular = 2.0 * np.pi if n == 0 else 0.0
            value = lam * rho ** 2 / (self.params.beta * safe) * angular
        else:
            pmf = stats.poisson.pmf(n, self._rate * rho[..., None])
            value = lam * rho ** 2 / (self.params.beta * safe) * 4.0 * (pmf @ self._theta_weights)
        value = np.where(inside, value, 0.0)
        return float(value) if value.ndim == 0 else value

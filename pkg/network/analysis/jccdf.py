#!/usr/bin/env python3
from typing import Callable, Tuple

import numpy as np
from scipy import optimize

from utils.quadrature import adaptive_gauss_legendre, march_integral
from utils.specfun import upper_gamma_int
from ..channel import gain_ccdf, gain_pdf, gain_pdf_coeffs, gain_quantile_bound
from .policy import ScenarioDerived

# share of outer_tol left to P{L0 < y_lo}; smaller serving losses are never integrated
LOWER_SHARE = 1e-2
# outer nodes whose density (in log y) is below this share of outer_tol are not inverted
NEGLIGIBLE_SHARE = 1e-3
# tail probability of the interference bound beyond which F_I is taken as 1
CHERNOFF_TAIL = 1e-12
# widest outer panel in log(y)
OUTER_PANEL = 0.5


class JointCcdfMixin():
    """
    Joint rate-energy CCDF F_c(R*, Q*) = P{R >= R*, Q >= Q*}.

    Given L0 = y and serving gain g0 = x, the targets hold when

        q*/P - x/y <= I <= x gamma / y - sigma*^2 / P,

    a non-empty interval once x >= T* y / P. The conditional interference law
    is integrated against the gain density in x, then against the density of
    L0 in log(y). Realisations without any head (L0 = inf) meet neither target.
    """
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.gain_coeffs = gain_pdf_coeffs(self.params.n_t, self.params.n_r)
        self.gain_ceiling = gain_quantile_bound(self.gain_coeffs)
        self.loss_support = self._find_loss_support()

    def _find_loss_support(self) -> Tuple[float, float]:
        """(y_lo, y_hi): where P{L0 <= y} reaches LOWER_SHARE outer_tol and 1 - survival_tol (or the last ceiling)."""
        ceilings = [self.threshold(n) for n in self.active_populations()]
        if not ceilings:
            return (np.nan, np.nan)
        top = max(ceilings)
        mass = float(self.total_intensity(top))
        lower = LOWER_SHARE * self.policy.quad.outer_tol
        if mass <= lower:
            return (np.nan, np.nan)

        def excess(log_alpha, level):
            return np.log(max(float(self.total_intensity(np.exp(log_alpha))), 1e-300)) - np.log(level)

        high = np.log(top)
        low = high - 10.0
        while excess(low, lower) > 0:
            low -= 10.0
        y_lo = np.exp(optimize.brentq(excess, low, high, args=(lower,), xtol=1e-10))
        target = -np.log(self.policy.quad.survival_tol)
        if mass > target:
            y_hi = np.exp(optimize.brentq(excess, np.log(y_lo), high, args=(target,), xtol=1e-10))
        else:
            y_hi = top
        self.logger.debug("serving-loss support [%.4g, %.4g]", y_lo, y_hi)
        return (float(y_lo), float(y_hi))

    def _outer_edges(self) -> np.ndarray:
        y_lo, y_hi = self.loss_support
        low, high = np.log(y_lo), np.log(y_hi)
        cuts = [np.log(self.threshold(n)) for n in self.active_populations()]
        points = sorted({low, high, *[c for c in cuts if low < c < high]})
        edges = [points[0]]
        for right in points[1:]:
            pieces = max(1, int(np.ceil((right - edges[-1]) / OUTER_PANEL)))
            edges.extend(np.linspace(edges[-1], right, pieces + 1)[1:])
        return np.asarray(edges)

    def _integrate_over_loss(self, inner: Callable[[float], float]) -> float:
        """E[inner(L0); L0 < inf] with the density of L0 in log(y)."""
        y_lo, _ = self.loss_support
        if not np.isfinite(y_lo):
            return 0.0
        controls = self.policy.quad
        floor = NEGLIGIBLE_SHARE * controls.outer_tol

        def integrand(log_y):
            y = np.exp(log_y)
            weight = y * self.total_intensity_derivative(y) * np.exp(-self.total_intensity(y))
            values = np.array([inner(float(point)) if w > floor else 0.0 for point, w in zip(y, weight)])
            return weight * values

        value, residual, panels = adaptive_gauss_legendre(
            integrand, self._outer_edges(), order=8, abs_tol=controls.outer_tol,
            rel_tol=controls.outer_tol, max_panels=controls.max_panels, dimension="y")
        self.logger.debug("outer integral %.8g over %d panels (residual %.2e)", float(value), panels, residual)
        return float(np.clip(np.real(value), 0.0, 1.0))

    def joint_inner(self, scenario: ScenarioDerived, y: float) -> float:
        """
        P{both targets | L0 = y}: the gain integral of F_I(upper) - F_I(lower).

        Beyond the point where F_I(upper) is 1 up to CHERNOFF_TAIL and the lower
        bound is negative the integrand is the gain density alone, added in
        closed form.
        """
        p = self.params.p_tx
        coeffs = self.gain_coeffs
        x0 = scenario.t_star * y / p
        if x0 >= self.gain_ceiling:
            return 0.0
        noise = scenario.sigma_star2 / p
        upper_zero = noise * y / scenario.gamma
        lower_zero = scenario.q_star * y / p
        # P{I > z | y} <= exp(-(y/2)(z - 2 E[I | y]))
        z_cap = 2.0 * self.mean_interference(y) + 2.0 * np.log(1.0 / CHERNOFF_TAIL) / y
        x_cap = max(x0, lower_zero, (z_cap + noise) * y / scenario.gamma)
        end = min(x_cap, self.gain_ceiling)
        tail = float(gain_ccdf(coeffs, x_cap)) if x_cap < self.gain_ceiling else 0.0
        if end <= x0:
            return float(np.clip(tail, 0.0, 1.0))

        law = self.conditional_cdf(y)
        edges = sorted({x0, end, *[b for b in (upper_zero, lower_zero) if x0 < b < end]})

        def integrand(x):
            upper = law(x * scenario.gamma / y - noise)
            lower_arg = scenario.q_star / p - x / y
            lower = np.where(lower_arg > 0, law(np.maximum(lower_arg, 0.0)), 0.0)
            return gain_pdf(coeffs, x) * (upper - lower)

        value, _, _ = adaptive_gauss_legendre(
            integrand, edges, abs_tol=0.1 * self.policy.quad.outer_tol, rel_tol=1e-8,
            max_panels=self.policy.quad.max_panels, dimension="x")
        return float(np.clip(float(value) + tail, 0.0, 1.0))

    def transform_inner(self, scenario: ScenarioDerived, y: float) -> float:
        """
        The same conditional probability from the closed-form gain transforms:

            (1/pi) int_0^inf Im{G(w)} / w dw,
            G = norm sum a [e^{-jwq*/P} (s - jw/y)^{-(1+t)} Gamma(1+t, (T*/P)(sy - jw))
                          - e^{jw sigma*^2/P} (s + jw gamma/y)^{-(1+t)} Gamma(1+t, (T*/P)(sy + jw gamma))] Phi(w; y).

        Slower than ``joint_inner``; kept as an independent check of it.
        """
        p = self.params.p_tx
        coeffs = self.gain_coeffs
        lead = scenario.t_star / p
        gamma = scenario.gamma

        def transform(omega):
            phi = np.exp(self.interference_log_cf(omega, y))
            total = np.zeros(omega.shape, dtype=complex)
            for s, t, a in coeffs.terms:
                lower = (np.exp(-1j * omega * scenario.q_star / p) * (s - 1j * omega / y) ** (-(1.0 + t))
                         * upper_gamma_int(t + 1, lead * (s * y - 1j * omega)))
                upper = (np.exp(1j * omega * scenario.sigma_star2 / p) * (s + 1j * omega * gamma / y) ** (-(1.0 + t))
                         * upper_gamma_int(t + 1, lead * (s * y + 1j * omega * gamma)))
                total = total + float(a) * (lower - upper)
            return coeffs.norm * total * phi

        def integrand(omega):
            return np.imag(transform(omega)) / omega

        frequency = abs(scenario.q_star - scenario.t_star) / p
        reach = max(frequency, gamma / y, self.inversion_scale(y))

        def envelope(omega):
            return np.abs(transform(np.array([omega]))[0]) / (np.pi * omega * reach)

        value = march_integral(integrand, envelope, np.pi / reach, reach, self.policy.quad)
        return float(np.clip(value / np.pi, 0.0, 1.0))

    def jccdf(self, r_star: float, q_star_in: float, method: str = "direct") -> float:
        """
        P{R >= r_star, Q >= q_star_in}.

        Args:
            r_star: Rate threshold, bits/s, > 0.
            q_star_in: Harvested-power threshold, W, > 0.
            method: "direct" integrates the conditional interference CDF against
                the gain density; "transform" uses the closed-form gain transforms.
        """
        if not q_star_in > 0:
            raise ValueError(f"energy threshold must be positive, got {q_star_in}")
        scenario = ScenarioDerived.from_targets(self.params, r_star, q_star_in)
        if method == "direct":
            inner = self.joint_inner
        elif method == "transform":
            inner = self.transform_inner
        else:
            raise ValueError(f"unknown method {method!r}")
        value = self._integrate_over_loss(lambda y: inner(scenario, y))
        self.logger.debug("F_c(%.6g bit/s, %.6g W) = %.6g", r_star, q_star_in, value)
        return value

    def rate_ccdf(self, r_star: float) -> float:
        """P{R >= r_star}: the energy target relaxed to zero."""
        scenario = ScenarioDerived.from_targets(self.params, r_star, 0.0)
        return self._integrate_over_loss(lambda y: self.joint_inner(scenario, y))

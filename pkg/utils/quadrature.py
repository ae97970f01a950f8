#!/usr/bin/env python3
"""
Quadrature kernels shared by the analytic engine.

* ``gauss_legendre`` / ``adaptive_gauss_legendre``: composite Gauss-Legendre
  rules with an embedded lower-order error estimate and dyadic refinement.
* ``gil_pelaez_cdf``: CDF from a characteristic function by marching panels
  no wider than half an oscillation period.
* ``FilonCdf``: the same inversion for many abscissae at once. The log of the
  characteristic function is sampled on geometrically growing panels and the
  oscillatory factor is integrated exactly against Legendre interpolants
  (spherical Bessel moments), so the cost does not depend on z.
"""
from dataclasses import dataclass
from functools import lru_cache
import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre
from scipy import interpolate, special

from utils.errors import InversionError, QuadratureError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadControls:
    """
    Tolerances and budgets for every numerical integral.

    Attributes:
        abs_tol: Stop the frequency march once |CF - atom| falls below this.
        rel_tol: Relative per-panel tolerance of the adaptive rules.
        omega_max: Largest dimensionless frequency before inversion gives up.
        max_panels: Panel budget of one adaptive integral.
        outer_tol: Absolute tolerance of the J-CCDF integrals over L0 and g0.
        survival_tol: Upper L0 limit where P{L0 > y} drops below this.
    """
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    omega_max: float = 1e6
    max_panels: int = 20000
    outer_tol: float = 1e-6
    survival_tol: float = 1e-8

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "outer_tol", "survival_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if self.omega_max <= 0:
            raise ValueError(f"omega_max must be positive, got {self.omega_max}")
        if self.max_panels < 1:
            raise ValueError(f"max_panels must be positive, got {self.max_panels}")


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss-Legendre rule on [-1, 1]."""
    nodes, weights = legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def composite_rule(edges: Sequence[float], order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of a composite rule over consecutive panels."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def adaptive_gauss_legendre(func: Callable[[np.ndarray], np.ndarray], edges: Sequence[float],
                            order: int = 16, abs_tol: float = 1e-10, rel_tol: float = 1e-10,
                            max_panels: int = 20000, dimension: str = "x") -> Tuple[complex, float, int]:
    """
    Integrate ``func`` over consecutive panels with dyadic refinement.

    Every panel is integrated with an ``order``-point rule and checked against
    an ``order // 2``-point rule; failing panels are halved. ``func`` receives
    all nodes of one refinement sweep in a single 1-D array.

    Args:
        func: Vectorised integrand.
        edges: Initial panel edges, increasing.
        order: Order of the accepted rule.
        abs_tol: Absolute tolerance, shared among panels in proportion to width.
        rel_tol: Per-panel relative tolerance.
        max_panels: Budget of accepted plus pending panels.
        dimension: Variable name reported on failure.

    Returns:
        (integral, summed error estimate, number of accepted panels).

    Raises:
        QuadratureError: the panel budget ran out.
    """
    edges = np.asarray(edges, dtype=float)
    span = edges[-1] - edges[0]
    if span <= 0:
        return 0.0, 0.0, 0
    x_hi, w_hi = gauss_legendre(order)
    x_lo, w_lo = gauss_legendre(max(order // 2, 2))
    left, right = edges[:-1].copy(), edges[1:].copy()
    total, residual, accepted = 0.0, 0.0, 0

    while left.size:
        mid = 0.5 * (left + right)
        half = 0.5 * (right - left)
        nodes_hi = mid[:, None] + half[:, None] * x_hi[None, :]
        nodes_lo = mid[:, None] + half[:, None] * x_lo[None, :]
        values = np.asarray(func(np.concatenate([nodes_hi.ravel(), nodes_lo.ravel()])))
        split = nodes_hi.size
        fine = half * (values[:split].reshape(nodes_hi.shape) @ w_hi)
        coarse = half * (values[split:].reshape(nodes_lo.shape) @ w_lo)
        error = np.abs(fine - coarse)
        tolerance = np.maximum(abs_tol * (right - left) / span, rel_tol * np.abs(fine))
        good = error <= tolerance

        total = total + fine[good].sum()
        residual += float(error[good].sum())
        accepted += int(good.sum())
        bad = ~good
        if accepted + 2 * int(bad.sum()) > max_panels:
            raise QuadratureError("adaptive Gauss-Legendre ran out of panels",
                                  panels=accepted, residual=residual + float(error[bad].sum()),
                                  dimension=dimension)
        left = np.concatenate([left[bad], mid[bad]])
        right = np.concatenate([mid[bad], right[bad]])

    return total, residual, accepted


def gil_pelaez_cdf(cf: Callable[[np.ndarray], np.ndarray], z: float, scale: float,
                   atom: float = 0.0, controls: QuadControls = QuadControls(),
                   batch: int = 32) -> float:
    """
    Gil-Pelaez inversion with a point mass at zero.

    F(z) = 1/2 + atom/2 - (1/pi) int_0^inf Im{e^{-jwz} (cf(w) - atom)} / w dw

    Panels are pi / max(z, scale) wide (half an oscillation period) and are
    marched in batches until the envelope |cf - atom| / (pi u) drops below
    ``controls.abs_tol``, u being the dimensionless frequency w max(z, scale).

    Args:
        cf: Vectorised characteristic function.
        z: Abscissa, z >= 0.
        scale: Typical size of the variable; sets the panel width for small z.
        atom: Probability of the value 0 (removed before inverting).
        controls: Tolerances.
        batch: Panels per marching step.

    Raises:
        InversionError: the envelope had not decayed by ``controls.omega_max``.
    """
    if z < 0:
        return 0.0
    if z == 0:
        return float(atom)
    reach = max(z, scale)

    def integrand(omega):
        return np.imag(np.exp(-1j * omega * z) * (cf(omega) - atom)) / omega

    def envelope(omega):
        return np.abs(cf(np.array([omega]))[0] - atom) / (np.pi * omega * reach)

    total = march_integral(integrand, envelope, np.pi / reach, reach, controls, batch)
    return float(np.clip(0.5 + 0.5 * atom - total / np.pi, 0.0, 1.0))


def march_integral(integrand: Callable[[np.ndarray], np.ndarray], envelope: Callable[[float], float],
                   width: float, reach: float, controls: QuadControls = QuadControls(),
                   batch: int = 32) -> float:
    """
    Integrate a decaying oscillatory ``integrand`` over [0, inf).

    Panels of ``width`` are added ``batch`` at a time, each batch refined
    adaptively, until ``envelope`` at the end of the last batch is below
    ``controls.abs_tol``. ``reach`` converts frequencies into the
    dimensionless u = omega * reach checked against ``controls.omega_max``.

    Raises:
        InversionError: u passed ``controls.omega_max`` first.
        QuadratureError: the panel budget ran out.
    """
    total, residual, panels, start = 0.0, 0.0, 0, 0.0
    while True:
        edges = start + width * np.arange(batch + 1)
        value, error, used = adaptive_gauss_legendre(
            integrand, edges, abs_tol=controls.abs_tol * batch, rel_tol=controls.rel_tol,
            max_panels=controls.max_panels, dimension="omega")
        total += float(np.real(value))
        residual += error
        panels += used
        start = edges[-1]
        bound = float(envelope(start))
        if bound < controls.abs_tol:
            break
        if start * reach > controls.omega_max:
            raise InversionError("characteristic function has not decayed",
                                 panels=panels, residual=bound, dimension="omega")
        if panels > controls.max_panels:
            raise QuadratureError("frequency march exceeded the panel budget",
                                  panels=panels, residual=residual, dimension="omega")

    logger.debug("frequency march: %d panels up to u=%.3g, residual %.2e", panels, start * reach, residual)
    return total


class FilonCdf:
    """
    CDF of a nonnegative variable from its log characteristic function.

    ``log_cf`` must be analytic off the negative imaginary axis below
    -j*unit. It is sampled on panels [0, unit/2], [unit/2, unit], [unit, 2 unit], ...
    until |exp(log_cf) - atom| < abs_tol; each panel is then split so that
    log_cf varies by at most ``step`` across a piece, and the inversion
    integral is evaluated with exact moments of e^{-jwz} against the
    Legendre interpolant of (cf(w) - 1) / w.

    Args:
        log_cf: Vectorised log of the characteristic function, log_cf(0) = 0.
        atom: Probability of the value 0.
        unit: Distance of the nearest singularity of ``log_cf`` from the real axis.
        controls: Tolerances.
        order: Nodes per panel.
        step: Largest change of ``log_cf`` allowed across one interpolation piece.
        reach: Frequency by which the characteristic function is expected to
            have decayed; sampling gives up past ``controls.omega_max * reach``.
            Defaults to ``unit``.
    """

    def __init__(self, log_cf: Callable[[np.ndarray], np.ndarray], atom: float, unit: float,
                 controls: QuadControls = QuadControls(), order: int = 16, step: float = 1.0,
                 max_pieces: int = 64, reach: Optional[float] = None):
        if unit <= 0:
            raise ValueError(f"unit must be positive, got {unit}")
        if reach is not None and reach <= 0:
            raise ValueError(f"reach must be positive, got {reach}")
        self.atom = float(atom)
        self.unit = float(unit)
        self.reach = float(unit if reach is None else max(reach, unit))
        self.order = order
        self.logger = logging.getLogger(self.__class__.__name__)

        x, w = gauss_legendre(order)
        k = np.arange(order)
        # row i: weight_i (2k+1) (-j)^k P_k(x_i), so that the moment of node i is row_i . j_k(theta)
        legendre_values = np.stack([legendre.legval(x, np.eye(order)[n]) for n in range(order)], axis=1)
        self._moments = (w[:, None] * (2 * k + 1)[None, :] * (-1j) ** k[None, :] * legendre_values)
        self._orders = k

        edges = self._sample_panels(log_cf, controls)
        self.omega_end = edges[-1]
        self._build_pieces(edges, step, max_pieces)

    def _sample_panels(self, log_cf, controls: QuadControls) -> np.ndarray:
        x, _ = gauss_legendre(self.order)
        edges = [0.0, 0.5 * self.unit, self.unit]
        samples = []
        batch = 4
        while True:
            left = np.asarray(edges[-batch - 1:-1] if len(samples) else edges[:-1])
            right = np.asarray(edges[-batch:] if len(samples) else edges[1:])
            nodes = 0.5 * (left + right)[:, None] + 0.5 * (right - left)[:, None] * x[None, :]
            values = np.asarray(log_cf(nodes.ravel()), dtype=complex).reshape(nodes.shape)
            samples.extend(values)
            envelope = np.abs(np.exp(values[:, -1]) - self.atom)
            if np.any(envelope < controls.abs_tol):
                stop = int(np.argmax(envelope < controls.abs_tol))
                drop = len(left) - stop - 1
                if drop:
                    del samples[-drop:]
                    del edges[-drop:]
                break
            if edges[-1] / self.reach > controls.omega_max:
                raise InversionError("characteristic function has not decayed",
                                     panels=len(samples), residual=float(envelope[-1]),
                                     dimension="omega")
            for _ in range(batch):
                edges.append(2.0 * edges[-1])
        self._coarse = np.asarray(samples)
        return np.asarray(edges)

    def _build_pieces(self, edges: np.ndarray, step: float, max_pieces: int):
        x, _ = gauss_legendre(self.order)
        centers, halves, values = [], [], []
        for (a, b), log_values in zip(zip(edges[:-1], edges[1:]), self._coarse):
            spread = np.max(np.abs(log_values - log_values.mean()))
            pieces = int(min(max_pieces, max(1, np.ceil(2.0 * spread / step))))
            cuts = np.linspace(a, b, pieces + 1)
            mid = 0.5 * (cuts[1:] + cuts[:-1])
            half = 0.5 * (cuts[1:] - cuts[:-1])
            nodes = mid[:, None] + half[:, None] * x[None, :]
            if pieces == 1:
                log_piece = log_values[None, :]
            else:
                coarse_nodes = 0.5 * (a + b) + 0.5 * (b - a) * x
                stacked = np.column_stack([log_values.real, log_values.imag])
                fitted = interpolate.barycentric_interpolate(coarse_nodes, stacked, nodes.ravel())
                log_piece = (fitted[:, 0] + 1j * fitted[:, 1]).reshape(nodes.shape)
            centers.append(mid)
            halves.append(half)
            values.append(np.expm1(log_piece) / nodes)
        self._centers = np.concatenate(centers)
        self._halves = np.concatenate(halves)
        self._values = np.concatenate(values)
        self.logger.debug("Filon inversion: %d panels, %d pieces, omega_end=%.3g",
                          len(edges) - 1, self._centers.size, self.omega_end)

    @property
    def pieces(self) -> int:
        return int(self._centers.size)

    def __call__(self, z) -> np.ndarray:
        """CDF values at the abscissae ``z`` (array or scalar)."""
        z = np.asarray(z, dtype=float)
        flat = z.ravel()
        out = np.zeros(flat.shape)
        out[flat == 0] = self.atom
        positive = flat > 0
        if np.any(positive):
            zp = flat[positive]
            theta = zp[:, None] * self._halves[None, :]
            bessel = special.spherical_jn(self._orders[:, None, None], theta[None, :, :])
            moments = np.einsum("ik,kzp->zpi", self._moments, bessel)
            pieces = np.einsum("zpi,pi->zp", moments, self._values)
            pieces *= self._halves[None, :] * np.exp(-1j * zp[:, None] * self._centers[None, :])
            oscillatory = np.imag(pieces.sum(axis=1))
            si, _ = special.sici(self.omega_end * zp)
            out[positive] = (0.5 + 0.5 * self.atom + (1.0 - self.atom) * si / np.pi
                             - oscillatory / np.pi)
        out = np.clip(out, 0.0, 1.0)
        return out.reshape(z.shape) if z.ndim else float(out[0])

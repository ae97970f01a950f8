#!/usr/bin/env python3
"""
Special functions used by the blockage analysis.

Only the narrow families the analysis needs are provided:

* the upper incomplete gamma function of integer order (complex argument),
* the Gauss function 2F1(1, -v; 1 - v; z) for complex z,
* 2F1(1/2, (eta+1)/2; (eta+3)/2; 1/2) and the wall-weight bracket built on it.

All functions accept numpy arrays and broadcast their arguments.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy import integrate, special

from utils.errors import BranchCutError, RangeError, TruncationError

ArrayLike = Union[float, complex, np.ndarray]

# |z| at which 2F1(1, -v; 1 - v; z) switches from its Gauss series to the continuation
SWITCH_RADIUS = 0.7
# beyond this radius the continuation uses a series in 1/z instead of quadrature
RECIPROCAL_RADIUS = 2.0
# points closer than this to [0, 1] are integrated adaptively
SEGMENT_GUARD = 0.05
JACOBI_ORDER = 64
INTEGER_GUARD = 1e-3


@dataclass(frozen=True)
class SeriesControl:
    """Truncation controls shared by every series in this module."""
    rel_tol: float = 1e-12
    max_terms: int = 500

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 8:
            raise ValueError(f"max_terms must be at least 8, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def _finish(value: np.ndarray):
    """Return numpy scalars for 0-d results, arrays otherwise."""
    return value[()] if value.ndim == 0 else value


def upper_gamma_int(n: int, z: ArrayLike) -> ArrayLike:
    """
    Upper incomplete gamma function of positive integer order.

    Uses the finite expansion Gamma(n, z) = (n-1)! e^{-z} sum_{k<n} z^k / k!,
    evaluated term by term in log space so that large |z| neither overflows
    the polynomial nor underflows the exponential prematurely.

    Args:
        n: Order, n >= 1.
        z: Real or complex argument (array or scalar).

    Returns:
        Gamma(n, z), real for real input and complex for complex input.

    Raises:
        ValueError: n < 1.
        RangeError: the result is not representable.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"order must be a positive integer, got {n}")
    n = int(n)
    z = np.asarray(z)
    real_input = not np.iscomplexobj(z)
    zc = z.astype(complex)[..., None]
    k = np.arange(n)

    at_origin = zc == 0
    safe = np.where(at_origin, 1.0, zc)
    with np.errstate(over="ignore", invalid="ignore"):
        log_terms = special.gammaln(n) - zc + k * np.log(safe) - special.gammaln(k + 1)
        terms = np.exp(log_terms)
    # z = 0 keeps only the k = 0 term
    terms = np.where(at_origin & (k > 0), 0.0, terms)
    value = terms.sum(axis=-1)

    if not np.all(np.isfinite(value)):
        raise RangeError(f"Gamma({n}, z) overflows for |z| up to {np.max(np.abs(z)):.3e}")
    if real_input:
        value = value.real
    return _finish(value)


def _check_order(v: np.ndarray):
    if np.any(v <= 0):
        raise ValueError("v must be strictly positive")
    distance = np.abs(v - np.round(v))
    if np.any(distance < INTEGER_GUARD):
        bad = v[distance < INTEGER_GUARD].flat[0]
        raise ValueError(f"v = {bad} is within {INTEGER_GUARD} of an integer; "
                         "use the quadrature form instead")


def _gauss_series(v: np.ndarray, z: np.ndarray, ctl: SeriesControl) -> np.ndarray:
    """sum_k v z^k / (v - k), convergent for |z| < 1."""
    total = np.ones(z.shape, dtype=complex)
    power = np.ones(z.shape, dtype=complex)
    for k in range(1, ctl.max_terms + 1):
        power = power * z
        term = v * power / (v - k)
        total = total + term
        if np.all(np.abs(term) <= ctl.rel_tol * np.abs(total)):
            return total
    raise TruncationError(f"2F1 Gauss series did not converge in {ctl.max_terms} terms",
                          terms=ctl.max_terms)


def _reciprocal_series(v: np.ndarray, z: np.ndarray, ctl: SeriesControl) -> np.ndarray:
    """Regular part of the continuation for large |z|: -v sum_{k>=1} z^-k / (v + k)."""
    inverse = 1.0 / z
    power = np.ones(z.shape, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    for k in range(1, ctl.max_terms + 1):
        power = power * inverse
        term = -v * power / (v + k)
        total = total + term
        if np.all(np.abs(term) <= ctl.rel_tol * np.maximum(np.abs(total), 1.0)):
            return total
    raise TruncationError(f"2F1 reciprocal series did not converge in {ctl.max_terms} terms",
                          terms=ctl.max_terms)


@lru_cache(maxsize=512)
def _jacobi_rule(v: float, order: int = JACOBI_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes on [0, 1] and weights for integrals of u^v f(u) du."""
    x, w = special.roots_jacobi(order, 0.0, v)
    return (1.0 + x) / 2.0, w * 2.0 ** (-v - 1.0)


def _segment_integral(v: float, z: complex) -> complex:
    """int_0^1 u^v / (u - z) du for z close to (but off) the segment [0, 1]."""
    options = dict(limit=200, epsabs=1e-14, epsrel=1e-12)
    if 0.0 < z.real < 1.0:
        options["points"] = [z.real]
    re, _ = integrate.quad(lambda u: ((u ** v) / (u - z)).real, 0.0, 1.0, **options)
    im, _ = integrate.quad(lambda u: ((u ** v) / (u - z)).imag, 0.0, 1.0, **options)
    return complex(re, im)


def _principal_value(v: float, x: float) -> float:
    """2F1(1, -v; 1 - v; x) for real 0 < x < 1 through the Cauchy principal value."""
    pv, _ = integrate.quad(lambda u: u ** v, 0.0, 1.0, weight="cauchy", wvar=x)
    return np.pi * v / np.tan(np.pi * v) * x ** v + v * pv


def hyp2f1_interference_split(v: ArrayLike, z: ArrayLike,
                              ctl: SeriesControl = DEFAULT_CONTROL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split 2F1(1, -v; 1 - v; z) into a singular and a regular part.

    Outside the switchover radius the function is continued as

        2F1 = pi v / sin(pi v) (-z)^v + v int_0^1 u^v / (u - z) du,

    which holds off the cut [1, inf). The return value is ``(singular, regular)``
    with 2F1 = regular + singular * pi v / sin(pi v) * (-z)^v. Callers that
    subtract two such values can cancel the (-z)^v growth exactly.

    Args:
        v: Positive non-integer order(s).
        z: Complex argument(s); broadcast against ``v``.
        ctl: Series truncation controls.

    Returns:
        Boolean array flagging the continued entries, and the regular part.

    Raises:
        BranchCutError: some z is real and >= 1.
        ValueError: some v is not positive or lies too close to an integer.
        TruncationError: a series failed to converge.
    """
    v, z = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(z, dtype=complex))
    shape = z.shape
    v, z = v.ravel().copy(), z.ravel().copy()
    _check_order(v)
    on_cut = (z.imag == 0) & (z.real >= 1.0)
    if np.any(on_cut):
        raise BranchCutError(f"2F1(1, -v; 1 - v; z) is undefined on the cut, z = {z[on_cut][0]}")

    singular = np.zeros(z.shape, dtype=bool)
    regular = np.empty(z.shape, dtype=complex)
    radius = np.abs(z)

    inner = radius <= SWITCH_RADIUS
    if np.any(inner):
        regular[inner] = _gauss_series(v[inner], z[inner], ctl)

    outer = radius >= RECIPROCAL_RADIUS
    if np.any(outer):
        regular[outer] = _reciprocal_series(v[outer], z[outer], ctl)
        singular[outer] = True

    middle = ~inner & ~outer
    if np.any(middle):
        gap = np.abs(z - np.clip(z.real, 0.0, 1.0))
        near = middle & (gap < SEGMENT_GUARD)
        far = middle & ~near

        for order in np.unique(v[far]):
            sel = far & (v == order)
            nodes, weights = _jacobi_rule(float(order))
            integral = (weights / (nodes - z[sel][:, None])).sum(axis=1)
            regular[sel] = order * integral
            singular[sel] = True

        for index in np.flatnonzero(near):
            order, point = float(v[index]), complex(z[index])
            if point.imag == 0.0:
                regular[index] = _principal_value(order, point.real)
            else:
                regular[index] = order * _segment_integral(order, point)
                singular[index] = True

    return singular.reshape(shape), regular.reshape(shape)


def hyp2f1_interference(v: ArrayLike, z: ArrayLike, ctl: SeriesControl = DEFAULT_CONTROL) -> ArrayLike:
    """
    Evaluate 2F1(1, -v; 1 - v; z) = sum_k v z^k / (v - k) anywhere off [1, inf).

    The Gauss series is used for |z| <= 0.7 and the continuation of
    ``hyp2f1_interference_split`` beyond it.
    """
    singular, regular = hyp2f1_interference_split(v, z, ctl)
    v, z = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(z, dtype=complex))
    with np.errstate(invalid="ignore"):
        growth = np.pi * v / np.sin(np.pi * v) * np.power(-z, v)
    value = regular + np.where(singular, growth, 0.0)
    if not np.all(np.isfinite(value)):
        raise RangeError("2F1(1, -v; 1 - v; z) overflowed")
    return _finish(value)


def hyp2f1_chi(eta: ArrayLike) -> ArrayLike:
    """
    2F1(1/2, (eta+1)/2; (eta+3)/2; 1/2).

    The argument 1/2 sits well inside the unit disk, so scipy's Gauss
    summation is exact to rounding. Values grow from pi/(2 sqrt 2) at
    eta = 0 towards sqrt 2.
    """
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0):
        raise ValueError("eta must be nonnegative")
    value = special.hyp2f1(0.5, (eta + 1.0) / 2.0, (eta + 3.0) / 2.0, 0.5)
    if not np.all(np.isfinite(value)):
        raise TruncationError("2F1(1/2, (eta+1)/2; (eta+3)/2; 1/2) did not converge")
    return _finish(np.asarray(value))


def chi_bracket(eta: ArrayLike) -> ArrayLike:
    """
    The lambda_w-free factor of the wall weights.

    chi_eta(lambda_w) = lambda_w^eta * chi_bracket(eta), where

        chi_bracket(eta) = 2^{eta/2} sqrt(pi) Gamma((eta+1)/2) / Gamma((eta+2)/2)
                           - sqrt(2) 2F1(1/2, (eta+1)/2; (eta+3)/2; 1/2) / (eta+1)

    which also equals int_0^{pi/2} (cos t + sin t)^eta dt.
    """
    eta = np.asarray(eta, dtype=float)
    lead = np.exp(0.5 * eta * np.log(2.0) + 0.5 * np.log(np.pi)
                  + special.gammaln((eta + 1.0) / 2.0) - special.gammaln((eta + 2.0) / 2.0))
    value = lead - np.sqrt(2.0) * np.asarray(hyp2f1_chi(eta)) / (eta + 1.0)
    return _finish(np.asarray(value))


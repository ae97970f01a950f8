#!/usr/bin/env python3
"""
Propagation and small-scale fading.

The serving link uses MRT at the power head and MRC at the LPD, so its power
gain is the largest eigenvalue of H H^H for an n_r x n_t Rayleigh channel.
The density of that eigenvalue is a finite sum of terms a zeta^t e^{-s zeta};
the coefficients are produced here by expanding the determinant form of the
largest-eigenvalue CDF in exact integer arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import json
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import special

from utils.errors import RangeError
from .params import SystemParams

logger = logging.getLogger(__name__)

# exponential-polynomial: {(s, t): coefficient} meaning sum c zeta^t e^{-s zeta}
Poly = Dict[Tuple[int, int], int]


def path_loss(params: SystemParams, r, n_walls):
    """kappa r^beta / K^N for a head at distance ``r`` behind ``n_walls`` walls."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("path loss is undefined at r = 0 (the LPD sits at the origin)")
    value = params.kappa * r ** params.beta / params.k_pen ** np.asarray(n_walls, dtype=float)
    return float(value) if value.ndim == 0 else value


def sample_fading(rng: np.random.Generator, size=None):
    """Unit-mean exponential power gains of the interfering links."""
    return rng.exponential(1.0, size=size)


def sample_mimo_gain(n_t: int, n_r: int, rng: np.random.Generator, size: Optional[int] = None):
    """
    Largest eigenvalue of H H^H for H with i.i.d. CN(0, 1) entries.

    The smaller Gram matrix (min(n_t, n_r) square) is diagonalised; ``size``
    draws are handled as one batch.
    """
    if n_t < 1 or n_r < 1:
        raise ValueError(f"antenna counts must be positive, got n_t={n_t}, n_r={n_r}")
    m, n = min(n_t, n_r), max(n_t, n_r)
    batch = 1 if size is None else int(size)
    h = (rng.standard_normal((batch, m, n)) + 1j * rng.standard_normal((batch, m, n))) / np.sqrt(2.0)
    gram = h @ np.conj(np.swapaxes(h, -1, -2))
    largest = np.linalg.eigvalsh(gram)[:, -1]
    return float(largest[0]) if size is None else largest


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for (s1, t1), c1 in a.items():
        for (s2, t2), c2 in b.items():
            key = (s1 + s2, t1 + t2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: c for k, c in out.items() if c != 0}


def _poly_add(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for key, c in b.items():
        out[key] = out.get(key, 0) + sign * c
    return {k: c for k, c in out.items() if c != 0}


def _lower_gamma_poly(k: int) -> Poly:
    """gamma(k, zeta) = (k-1)! (1 - e^{-zeta} sum_{u<k} zeta^u / u!) with integer coefficients."""
    lead = math.factorial(k - 1)
    poly: Poly = {(0, 0): lead}
    for u in range(k):
        poly[(1, u)] = -lead // math.factorial(u)
    return poly


def _determinant(matrix) -> Poly:
    """Laplace expansion along rows, memoised on the set of columns still free."""
    size = len(matrix)

    @lru_cache(maxsize=None)
    def minor(row: int, free: int) -> Tuple[Tuple[Tuple[int, int], int], ...]:
        if row == size:
            return (((0, 0), 1),)
        total: Poly = {}
        sign = 1
        for col in range(size):
            if not free & (1 << col):
                continue
            rest = dict(minor(row + 1, free & ~(1 << col)))
            total = _poly_add(total, _poly_mul(matrix[row][col], rest), sign)
            sign = -sign
        return tuple(sorted(total.items()))

    return dict(minor(0, (1 << size) - 1))


@dataclass(frozen=True)
class GainPdfCoefficients:
    """
    f(zeta) = norm * sum a zeta^t e^{-s zeta}.

    ``terms`` holds (s, t, a) with integer a; ``norm`` makes the density
    integrate to one.
    """
    m: int
    n: int
    norm: float
    terms: Tuple[Tuple[int, int, int], ...]

    def moment(self, order: int) -> float:
        """E[g^order] from the closed form (t + order)! / s^(t + order + 1)."""
        total = sum(Fraction(a * math.factorial(t + order), s ** (t + order + 1)) for s, t, a in self.terms)
        return float(total) * self.norm

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "n": self.n, "norm": self.norm,
                           "terms": [[s, t, a] for s, t, a in self.terms]})

    @classmethod
    def from_json(cls, text: str) -> "GainPdfCoefficients":
        data = json.loads(text)
        return cls(int(data["m"]), int(data["n"]), float(data["norm"]),
                   tuple((int(s), int(t), int(a)) for s, t, a in data["terms"]))


@lru_cache(maxsize=64)
def gain_pdf_coeffs(n_t: int, n_r: int) -> GainPdfCoefficients:
    """
    Density coefficients of the largest eigenvalue of an m x n complex Wishart matrix.

    The CDF is proportional to det[gamma(n - m + i + j - 1, zeta)], i, j = 1..m.
    Each entry is expanded exactly, the determinant collected into terms
    zeta^t e^{-s zeta}, differentiated term by term and normalised.

    Raises:
        ValueError: a non-positive antenna count.
        RangeError: a coefficient or the normaliser does not fit a float.
    """
    if n_t < 1 or n_r < 1:
        raise ValueError(f"antenna counts must be positive, got n_t={n_t}, n_r={n_r}")
    m, n = min(n_t, n_r), max(n_t, n_r)
    matrix = [[_lower_gamma_poly(n - m + i + j + 1) for j in range(m)] for i in range(m)]
    cdf = _determinant(matrix)

    density: Poly = {}
    for (s, t), c in cdf.items():
        if t > 0:
            density[(s, t - 1)] = density.get((s, t - 1), 0) + t * c
        if s > 0:
            density[(s, t)] = density.get((s, t), 0) - s * c
    density = {k: c for k, c in density.items() if c != 0}

    mass = sum(Fraction(c * math.factorial(t), s ** (t + 1)) for (s, t), c in density.items())
    if mass <= 0:
        raise RangeError(f"gain density for m={m}, n={n} has non-positive mass")
    try:
        norm = float(1 / mass)
        for c in density.values():
            float(c)
    except OverflowError as exc:
        raise RangeError(f"gain coefficients for m={m}, n={n} overflow a float") from exc
    if norm == 0.0:
        raise RangeError(f"gain normaliser for m={m}, n={n} underflows")

    terms = tuple(sorted((s, t, c) for (s, t), c in density.items()))
    logger.debug("gain density m=%d n=%d: %d terms, norm=%.6g", m, n, len(terms), norm)
    return GainPdfCoefficients(m, n, norm, terms)


def gain_pdf(coeffs: GainPdfCoefficients, zeta):
    """Serving-link gain density at ``zeta`` (zero for negative arguments)."""
    zeta = np.asarray(zeta, dtype=float)
    safe = np.maximum(zeta, 0.0)
    value = np.zeros(zeta.shape)
    for s, t, a in coeffs.terms:
        value = value + float(a) * safe ** t * np.exp(-s * safe)
    value = np.where(zeta < 0, 0.0, np.maximum(coeffs.norm * value, 0.0))
    return float(value) if value.ndim == 0 else value


def gain_ccdf(coeffs: GainPdfCoefficients, x):
    """P{g > x} = norm sum a Gamma(t + 1, s x) / s^(t + 1)."""
    x = np.asarray(x, dtype=float)
    safe = np.maximum(x, 0.0)
    value = np.zeros(x.shape)
    for s, t, a in coeffs.terms:
        value = value + float(a) * math.factorial(t) * special.gammaincc(t + 1, s * safe) / s ** (t + 1)
    value = np.clip(coeffs.norm * value, 0.0, 1.0)
    value = np.where(x <= 0, 1.0, value)
    return float(value) if value.ndim == 0 else value


def gain_mean(coeffs: GainPdfCoefficients) -> float:
    return coeffs.moment(1)


def gain_quantile_bound(coeffs: GainPdfCoefficients, tail: float = 1e-14) -> float:
    """A point beyond which the gain tail is below ``tail`` (by doubling from the mean)."""
    x = max(gain_mean(coeffs), 1.0)
    while gain_ccdf(coeffs, x) > tail:
        x *= 2.0
    return x

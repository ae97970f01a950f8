#!/usr/bin/env python3
"""
Composed analytic engines and a functional front end.

Engines are memoised per (params, policy); both are frozen dataclasses, so
repeated calls with equal arguments share the eta-series weights and the
cached conditional interference laws.
"""
from functools import lru_cache

from ..params import SystemParams
from .bench import EvaluationCounterMixin
from .chi_table import chi as _chi
from .interference import InterferenceMixin
from .jccdf import JointCcdfMixin
from .oracle import QuadratureLossProcess
from .policy import TruncationPolicy
from .series import SeriesLossProcess


class AnalyticEngine(JointCcdfMixin, InterferenceMixin, SeriesLossProcess):
    """
    The eta-series loss process with conditional interference and J-CCDF evaluation.
    """
    pass


class OracleEngine(JointCcdfMixin, InterferenceMixin, QuadratureLossProcess):
    """
    Same surface as AnalyticEngine, with intensities integrated over the bearing
    and interference exponents integrated directly.
    """
    pass


class CountingEngine(EvaluationCounterMixin, AnalyticEngine):
    pass


@lru_cache(maxsize=32)
def get_engine(params: SystemParams, policy: TruncationPolicy = TruncationPolicy()) -> AnalyticEngine:
    return AnalyticEngine(params, policy)


def chi(eta: int, lambda_w: float) -> float:
    return _chi(eta, lambda_w)


def intensity(params: SystemParams, policy: TruncationPolicy, n: int, alpha):
    return get_engine(params, policy).intensity(n, alpha)


def intensity_derivative(params: SystemParams, policy: TruncationPolicy, n: int, alpha):
    return get_engine(params, policy).intensity_derivative(n, alpha)


def min_loss_cdf(params: SystemParams, policy: TruncationPolicy, alpha):
    return get_engine(params, policy).min_loss_cdf(alpha)


def delta(params: SystemParams, policy: TruncationPolicy, eta: int, n: int, omega, l0: float):
    return get_engine(params, policy).delta(eta, n, omega, l0)


def cf_phi_n(params: SystemParams, policy: TruncationPolicy, n: int, omega, l0: float):
    return get_engine(params, policy).cf_phi_n(n, omega, l0)


def interference_cdf(params: SystemParams, policy: TruncationPolicy, z: float, l0: float) -> float:
    return get_engine(params, policy).interference_cdf(z, l0)


def jccdf(params: SystemParams, policy: TruncationPolicy, r_star: float, q_star_in: float) -> float:
    return get_engine(params, policy).jccdf(r_star, q_star_in)


def rate_ccdf(params: SystemParams, policy: TruncationPolicy, r_star: float) -> float:
    return get_engine(params, policy).rate_ccdf(r_star)

#!/usr/bin/env python3
from .policy import TruncationPolicy, ScenarioDerived
from .chi_table import ChiTable, REFERENCE_TABLE, matches_reference
from .base import BaseLossProcess
from .series import SeriesLossProcess, PopulationWeights
from .oracle import QuadratureLossProcess
from .interference import InterferenceMixin
from .jccdf import JointCcdfMixin
from .bench import EvaluationCounterMixin
from .engine import (AnalyticEngine, OracleEngine, CountingEngine, get_engine, chi, intensity,
                     intensity_derivative, min_loss_cdf, delta, cf_phi_n, interference_cdf, jccdf, rate_ccdf)

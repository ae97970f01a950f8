#!/usr/bin/env python3
"""
Wall weights chi_eta(lambda_w) of the blockage expansion.

chi_eta(lambda_w) = lambda_w^eta * [2^{eta/2} sqrt(pi) Gamma((eta+1)/2) / Gamma((eta+2)/2)
                                    - sqrt(2) 2F1(1/2, (eta+1)/2; (eta+3)/2; 1/2) / (eta+1)]

The bracket does not depend on lambda_w, so a table for one wall density
rescales to any other.
"""
from decimal import Decimal
import logging
import pickle
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils.specfun import chi_bracket

# Published reference values, kept as printed (two or three significant figures, truncated)
REFERENCE_TABLE: Dict[float, Tuple[str, ...]] = {
    0.01: ("1.5708", "0.02", "2.5e-4", "3.3e-6", "4.35e-8", "5.73e-10"),
    0.02: ("1.5708", "0.04", "1e-3", "2.6e-5", "6.96e-7", "1.83e-8"),
    0.03: ("1.5708", "0.06", "2.3e-3", "9e-5", "3.5e-6", "1.39e-7"),
    0.04: ("1.5708", "0.08", "4.1e-3", "2.1e-4", "1.1e-5", "5.87e-7"),
    0.05: ("1.5708", "0.1", "6.4e-3", "4.1e-4", "2.7e-5", "1.79e-6"),
}


def chi(eta, lambda_w: float):
    """chi_eta(lambda_w) for a nonnegative integer ``eta`` (or an array of them)."""
    if lambda_w < 0:
        raise ValueError(f"lambda_w must be nonnegative, got {lambda_w}")
    eta = np.asarray(eta, dtype=float)
    if np.any(eta < 0):
        raise ValueError("eta must be nonnegative")
    # 0 ** 0 = 1 keeps the eta = 0 column at pi / 2 when there are no walls
    value = np.power(lambda_w, eta) * chi_bracket(eta)
    return float(value) if value.ndim == 0 else value


def displayed_unit(text: str) -> float:
    """Value of one unit in the last printed digit, e.g. '2.5e-4' -> 1e-5."""
    return float(Decimal(1).scaleb(Decimal(text).as_tuple().exponent))


def matches_reference(computed: float, text: str, rel_tol: float = 0.01) -> bool:
    """Agreement with a printed value: within 1% or within one printed digit."""
    printed = float(text)
    return abs(computed - printed) <= max(rel_tol * abs(printed), displayed_unit(text))


class ChiTable:
    """
    chi_eta(lambda_w) for eta = 0..eta_max at one wall density.

    The table can be pickled to a file object and loaded back, so a batch of
    evaluations does not recompute it.
    """
    def __init__(self, lambda_w: float = 0.0, eta_max: int = 5, table_file: Optional = None):
        """
        Args:
            lambda_w: Walls per metre per axis.
            eta_max: Largest eta in the table.
            table_file: An optional binary file object to load the table from.
        """
        self.logger = logging.getLogger(self.__class__.__name__)
        if table_file:
            self.load_table(table_file)
        else:
            if int(eta_max) != eta_max or eta_max < 1:
                raise ValueError(f"eta_max must be a positive integer, got {eta_max}")
            self.lambda_w = float(lambda_w)
            self.eta_max = int(eta_max)
            self.values: List[float] = []
            self.build_table()

    @classmethod
    def build(cls, lambda_w: float, eta_max: int = 5) -> "ChiTable":
        return cls(lambda_w, eta_max)

    def build_table(self):
        self.values = [float(v) for v in np.atleast_1d(chi(np.arange(self.eta_max + 1), self.lambda_w))]
        self.logger.info("chi table built for lambda_w=%g up to eta=%d", self.lambda_w, self.eta_max)

    def __getitem__(self, eta: int) -> float:
        return self.values[eta]

    def __len__(self) -> int:
        return len(self.values)

    def save_table(self, file):
        """Pickle the table into a binary file object."""
        pickle.dump({"lambda_w": self.lambda_w, "eta_max": self.eta_max, "values": self.values}, file)
        self.logger.info("chi table saved (%d entries)", len(self.values))

    def load_table(self, file):
        """Load a table written by ``save_table``."""
        data = pickle.load(file)
        self.lambda_w = float(data["lambda_w"])
        self.eta_max = int(data["eta_max"])
        self.values = [float(v) for v in data["values"]]
        self.logger.info("chi table loaded for lambda_w=%g (%d entries)", self.lambda_w, len(self.values))

    def reference(self) -> Optional[Tuple[str, ...]]:
        for key, row in REFERENCE_TABLE.items():
            if np.isclose(key, self.lambda_w, rtol=0.0, atol=1e-12):
                return row
        return None

    def reference_mismatches(self) -> List[Tuple[int, str, float]]:
        """Entries deviating from the published table; empty when lambda_w is not tabulated."""
        row = self.reference()
        if row is None:
            return []
        bad = []
        for eta, text in enumerate(row[:len(self.values)]):
            if not matches_reference(self.values[eta], text):
                bad.append((eta, text, self.values[eta]))
                self.logger.warning("chi[%d] at lambda_w=%g is %.6g, table gives %s",
                                    eta, self.lambda_w, self.values[eta], text)
        return bad

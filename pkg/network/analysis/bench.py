#!/usr/bin/env python3
from typing import Tuple


class EvaluationCounterMixin():
    """
    A mixin that counts characteristic-function work during a J-CCDF evaluation.
    """
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._cf_calls = 0
        self._cf_points = 0

    def interference_log_cf(self, omega, l0: float):
        """
        Overrides the interference exponent to count calls and frequencies.
        """
        self._cf_calls += 1
        self._cf_points += int(getattr(omega, "size", 1))
        return super().interference_log_cf(omega, l0)

    def reset_counters(self):
        self._cf_calls = 0
        self._cf_points = 0

    def counted_jccdf(self, r_star: float, q_star_in: float) -> Tuple[float, int, int]:
        """
        J-CCDF together with the number of exponent calls and frequencies it took.
        """
        self.reset_counters()  # Reset the counters before each evaluation
        value = self.jccdf(r_star, q_star_in)
        return value, self._cf_calls, self._cf_points

"""The harmonic mappings under study: f(z) = h(z) - conj(z)."""

from __future__ import annotations

import numpy as np

from .expressions import AnalyticFunction, parse_function


class HarmonicMapping:
    """Pairs an analytic part ``h`` with the fixed anti-analytic part -conj(z).

    Instances are immutable and callable on scalars and numpy arrays; the
    derivative of the analytic part is precomputed since every classification
    needs it.
    """

    def __init__(self, h: AnalyticFunction):
        self.h = h
        self.h_prime = h.derivative()

    @classmethod
    def from_text(cls, text: str) -> "HarmonicMapping":
        return cls(parse_function(text))

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.h.eval_array(z) - np.conj(z)
        z = complex(z)
        return self.h.eval(z) - z.conjugate()

    def jacobian_det(self, z: complex) -> float:
        """|h'(z)|^2 - 1, the Jacobian determinant of f at z."""
        return abs(self.h_prime.eval(z)) ** 2 - 1.0

    def __repr__(self) -> str:
        return f"HarmonicMapping({self.h.text!r})"

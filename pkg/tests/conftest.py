"""Shared test helpers: independent oracles and golden-function fixtures.

The oracles deliberately avoid the library's adaptive code paths: the
winding oracle uses dense fixed sampling, and the coefficient oracle uses
the Cauchy integral evaluated by FFT on a circle.
"""

from __future__ import annotations

import numpy as np
import pytest

from harmonic_index import HarmonicMapping, format_complex


def dense_winding(func, curve, samples: int = 100_000) -> int:
    """Winding by brute-force uniform sampling; no adaptivity, no checks."""
    t = np.linspace(0.0, 1.0, samples + 1)
    values = np.asarray(func(curve.point(t)), dtype=complex)
    steps = np.angle(values[1:] / values[:-1])
    return int(round(float(steps.sum()) / (2.0 * np.pi)))


def cauchy_coefficients(func, center: complex, order: int,
                        radius: float = 0.3, samples: int = 4096) -> np.ndarray:
    """Taylor coefficients a_0..a_order via the Cauchy integral (FFT)."""
    k = np.arange(samples)
    ring = center + radius * np.exp(2j * np.pi * k / samples)
    values = np.asarray(func(ring), dtype=complex)
    dft = np.fft.fft(values) / samples
    powers = radius ** np.arange(order + 1)
    return dft[: order + 1] / powers


def function_text_from_coeffs(num, den=None) -> str:
    """Build function text sum_k c_k z^k [ / sum_k d_k z^k ] from coefficients."""

    def poly_text(coeffs) -> str:
        terms = []
        for k, c in enumerate(coeffs):
            c = complex(c)
            if c == 0:
                continue
            lit = f"({format_complex(c)})"
            if k == 0:
                terms.append(lit)
            elif k == 1:
                terms.append(f"{lit}*z")
            else:
                terms.append(f"{lit}*z^{k}")
        return " + ".join(terms) if terms else "0"

    text = f"({poly_text(num)})"
    if den is not None:
        text += f"/({poly_text(den)})"
    return text


@pytest.fixture
def golden():
    """The four running example mappings keyed by a short name."""
    return {
        "plus_one": HarmonicMapping.from_text("-z/(z^2-1)"),
        "minus_one": HarmonicMapping.from_text("z/(z^2-1)"),
        "zero_ring": HarmonicMapping.from_text("2*z^3+1/(8*z)"),
        "exp": HarmonicMapping.from_text("exp(z)-1"),
    }

"""Exception hierarchy for the harmonic_index package.

All package errors derive from :class:`HarmonicIndexError` so callers can
catch numeric failures in one sweep while letting programming errors
(TypeError etc.) propagate.
"""

from __future__ import annotations


class HarmonicIndexError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HarmonicIndexError):
    """Malformed function text. Carries the 0-based offset of the problem."""

    def __init__(self, message: str, position: int, text: str | None = None):
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.text = text


class DegenerateFunctionError(HarmonicIndexError):
    """The expression denotes no function (division by the zero function)."""


class PoleEvaluationError(HarmonicIndexError):
    """Evaluation (or series expansion) requested at a pole."""

    def __init__(self, point: complex, message: str | None = None):
        super().__init__(message or f"evaluation at a pole: {point}")
        self.point = point


class NotRationalError(HarmonicIndexError):
    """Operation requires a rational (or polynomial) canonical form."""


class SeriesArithmeticError(HarmonicIndexError):
    """Series operands disagree on center or order."""


class SeriesDivisionError(HarmonicIndexError):
    """Series division with a denominator whose constant term is ~0."""


class WindingError(HarmonicIndexError):
    """Base class for winding-computation failures."""


class ZeroOnCurveError(WindingError):
    """Some sample of f on the curve is (relatively) indistinguishable from 0."""

    def __init__(self, min_modulus: float, message: str | None = None):
        super().__init__(
            message or f"function vanishes on the curve (min |f| = {min_modulus:.3e})"
        )
        self.min_modulus = min_modulus


class NonFiniteOnCurveError(WindingError):
    """The curve crosses a point where f is undefined (pole of h)."""


class BisectionLimitError(WindingError):
    """Adaptive refinement hit its cap; the curve passes too close to a zero."""


class PhaseRoundingError(WindingError):
    """Accumulated phase is not within a quarter turn of an integer."""


class NonIsolatedZeroError(HarmonicIndexError):
    """Shrinking circles stay uniformly near zero: a zero curve, not a point."""


class IndexInstabilityError(HarmonicIndexError):
    """No two consecutive radii of the shrinking ladder agreed."""


class NotExceptionalError(HarmonicIndexError):
    """The point is neither a zero of f nor a pole of h."""


class SingularInputError(HarmonicIndexError):
    """A regular-only rule was applied to a singular point."""


class NormalizationError(HarmonicIndexError):
    """Series coefficients violate the normalization a classification needs."""


class IsolationCertificateError(HarmonicIndexError):
    """All scanned higher coefficients vanish; isolation cannot be certified."""


class UncoveredTypeError(HarmonicIndexError):
    """Rational type with numerator degree = denominator degree + 1 (no
    global winding formula applies)."""


class PointOnCurveError(HarmonicIndexError):
    """An audit point lies on (or numerically on) the audit curve."""


class IndeterminateVerdictError(HarmonicIndexError):
    """An interior point carries an indeterminate verdict with no value."""


class PortraitError(HarmonicIndexError):
    """Phase-portrait post-processing failure (gray pixel, unwrap failure)."""

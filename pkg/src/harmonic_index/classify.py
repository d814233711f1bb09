"""Classification of exceptional points and index computation.

Regular zeros get their index from the sign of |h'| - 1.  Singular zeros
(|h'| = 1 at the zero) are classified from the first two nonvanishing Taylor
coefficients of h at the zero: with h'(z0) = e^{i theta} and the first
nonzero higher derivative h^(n)(z0) = c e^{i phi}, the test quantity is

    eta = cos(phi - (n+1) * theta / 2)

whose sign (for odd n) or nonvanishing (for even n) determines the index.
A vanishing eta is reported as indeterminate: the first two coefficients
genuinely do not determine the index there, and the dispatcher falls back to
the numeric winding oracle (or, for the pure binomial family
a*z^n + z - conj(z), to its complete closed-form table).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import curves
from .errors import (
    IndexInstabilityError,
    IsolationCertificateError,
    NormalizationError,
    NotExceptionalError,
    SingularInputError,
)
from .mapping import HarmonicMapping
from .series import (
    COEFF_ZERO_RTOL,
    TruncatedSeries,
    coefficient_threshold,
    taylor_at,
)

SINGULAR_BAND_TOL = 1e-9
ETA_TOL = 1e-9
# Widened bands used by the dispatcher, which works with inexact zeros.
DISPATCH_CLASS_TOL = 1e-6
DISPATCH_ETA_TOL = 1e-6
ZERO_RESIDUAL_TOL = 1e-8
NEAR_INDETERMINATE_BAND = 1e-3
DEFAULT_SERIES_ORDER = 16
POLE_MATCH_TOL = 1e-8


def _principal_angle(value: complex) -> float:
    """arg in (-pi, pi]; numpy returns -pi for a negative-zero imaginary part."""
    angle = float(np.angle(value))
    if angle == -np.pi:
        return np.pi
    return angle


class SenseKind(str, enum.Enum):
    SENSE_PRESERVING = "sense-preserving"
    SENSE_REVERSING = "sense-reversing"
    SINGULAR = "singular"


@dataclass(frozen=True)
class PointClass:
    """Local behavior of f at a point, witnessed by |h'|."""

    kind: SenseKind
    witness: float

    @property
    def is_singular(self) -> bool:
        return self.kind is SenseKind.SINGULAR


class IndexMethod(str, enum.Enum):
    REGULAR_RULE = "RegularRule"
    NORMALIZED_THEOREM = "NormalizedTheorem"
    GENERAL_THEOREM = "GeneralTheorem"
    BINOMIAL_LEMMA = "BinomialLemma"
    NUMERIC_FALLBACK = "NumericFallback"


@dataclass(frozen=True)
class IndexVerdict:
    """An index value (or indeterminate) plus the method and its data."""

    value: int | None
    method: IndexMethod
    n: int | None = None
    a_n: complex | None = None
    theta: float | None = None
    phi: float | None = None
    eta: float | None = None
    order: int | None = None
    witness: float | None = None
    notes: tuple[str, ...] = ()

    @property
    def indeterminate(self) -> bool:
        return self.value is None

    def to_json(self) -> dict:
        out: dict = {"value": self.value, "method": self.method.value}
        if self.n is not None:
            out["n"] = self.n
        if self.a_n is not None:
            out["a_n"] = [self.a_n.real, self.a_n.imag]
        if self.theta is not None:
            out["theta"] = self.theta
        if self.phi is not None:
            out["phi"] = self.phi
        if self.eta is not None:
            out["eta"] = self.eta
        if self.order is not None:
            out["order"] = self.order
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# ---------------------------------------------------------------------------
# point classification
# ---------------------------------------------------------------------------


def classify_point(
    f: HarmonicMapping, z0: complex, tol: float = SINGULAR_BAND_TOL
) -> PointClass:
    """Sense-preserving / sense-reversing / singular at z0, from |h'(z0)|.

    ``tol`` is the half-width of the singularity band around |h'| = 1;
    callers holding inexact zeros should widen it consciously.
    """
    witness = abs(f.h_prime.eval(complex(z0)))
    if witness > 1.0 + tol:
        kind = SenseKind.SENSE_PRESERVING
    elif witness < 1.0 - tol:
        kind = SenseKind.SENSE_REVERSING
    else:
        kind = SenseKind.SINGULAR
    return PointClass(kind, witness)


def index_regular(point_class: PointClass) -> int:
    """+1 for sense-preserving, -1 for sense-reversing zeros."""
    if point_class.kind is SenseKind.SENSE_PRESERVING:
        return 1
    if point_class.kind is SenseKind.SENSE_REVERSING:
        return -1
    raise SingularInputError("regular rule applied to a singular point")


# ---------------------------------------------------------------------------
# singular zero criteria
# ---------------------------------------------------------------------------


def _validate_zero_series(series: TruncatedSeries) -> None:
    cutoff = coefficient_threshold(series.coeffs)
    if abs(series.coeffs[0]) > cutoff:
        raise NormalizationError(
            f"series constant term {series.coeffs[0]} is not zero"
        )
    if series.order < 2:
        raise IsolationCertificateError("series order too small to scan for n")


def _scan_first_higher(series: TruncatedSeries, coeff_rtol: float) -> int:
    n = series.first_nonzero(start=2, rtol=coeff_rtol)
    if n is None:
        raise IsolationCertificateError(
            "all higher coefficients vanish below threshold; raise the order "
            "or use the numeric oracle"
        )
    return n


def index_singular_normalized(
    series: TruncatedSeries,
    *,
    a1_tol: float = 1e-9,
    coeff_rtol: float = COEFF_ZERO_RTOL,
) -> IndexVerdict:
    """Index of a singular zero from a normalized series (a_0 = 0, a_1 = 1).

    The verdict depends on the parity of the first index n >= 2 with
    a_n != 0 and on the sign of Re(a_n); a vanishing real part is
    indeterminate by design.
    """
    _validate_zero_series(series)
    a1 = series.coeffs[1]
    if abs(a1 - 1.0) > a1_tol:
        raise NormalizationError(f"series is not normalized: a_1 = {a1}")
    n = _scan_first_higher(series, coeff_rtol)
    a_n = complex(series.coeffs[n])
    phi = _principal_angle(a_n)
    eta = float(np.cos(phi))
    cutoff = coefficient_threshold(series.coeffs, coeff_rtol)
    notes: tuple[str, ...] = ()
    if abs(a_n.real) <= cutoff:
        value: int | None = None
        notes = ("purely imaginary leading coefficient: indeterminate",)
    elif n % 2 == 0:
        value = 0
    else:
        value = 1 if a_n.real > 0 else -1
    return IndexVerdict(
        value=value,
        method=IndexMethod.NORMALIZED_THEOREM,
        n=n,
        a_n=a_n,
        theta=0.0,
        phi=phi,
        eta=eta,
        notes=notes,
    )


def index_singular_general(
    series: TruncatedSeries,
    *,
    a1_tol: float = 1e-9,
    eta_tol: float = ETA_TOL,
    coeff_rtol: float = COEFF_ZERO_RTOL,
) -> IndexVerdict:
    """Index of a singular zero without rotation normalization.

    Uses theta = arg(a_1) (principal value) and phi = arg(a_n); the verdict
    follows the sign/parity of eta = cos(phi - (n+1) theta / 2).
    """
    _validate_zero_series(series)
    a1 = complex(series.coeffs[1])
    if abs(abs(a1) - 1.0) > a1_tol:
        raise NormalizationError(f"|a_1| = {abs(a1)} is not 1 within {a1_tol}")
    theta = _principal_angle(a1)
    n = _scan_first_higher(series, coeff_rtol)
    a_n = complex(series.coeffs[n])
    phi = _principal_angle(a_n)
    eta = float(np.cos(phi - 0.5 * (n + 1) * theta))
    notes: tuple[str, ...] = ()
    if abs(eta) < NEAR_INDETERMINATE_BAND:
        notes = ("eta within 1e-3 of zero: near-indeterminate configuration",)
    if abs(eta) <= eta_tol:
        value: int | None = None
        notes = notes + ("eta = 0 within tolerance: indeterminate",)
    elif n % 2 == 0:
        value = 0
    else:
        value = 1 if eta > 0 else -1
    return IndexVerdict(
        value=value,
        method=IndexMethod.GENERAL_THEOREM,
        n=n,
        a_n=a_n,
        theta=theta,
        phi=phi,
        eta=eta,
        notes=notes,
    )


def rotate_to_normalized(series: TruncatedSeries) -> TruncatedSeries:
    """Rotation substitution taking a_1 = e^{i theta} to 1: the coefficient
    a_k picks up the factor e^{-i (k+1) theta / 2}."""
    a1 = complex(series.coeffs[1])
    theta = _principal_angle(a1)
    k = np.arange(series.order + 1)
    rotated = np.asarray(series.coeffs) * np.exp(-0.5j * (k + 1) * theta)
    return TruncatedSeries(series.center, rotated, series.exact_tail)


def index_binomial(a: complex, n: int) -> int:
    """Complete index table for a*z^n + z - conj(z) at the origin."""
    a = complex(a)
    if a == 0:
        raise ValueError("coefficient a must be nonzero")
    if n < 2:
        raise ValueError("n must be at least 2")
    re_zero = abs(a.real) <= coefficient_threshold(np.array([a]))
    if n % 2 == 0:
        return 1 if re_zero else 0
    return 1 if (re_zero or a.real > 0) else -1


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------


def _binomial_form(h) -> tuple[complex, int] | None:
    """(a, n) when h is exactly z + a*z^n as a polynomial, else None."""
    poly = h.polynomial
    if poly is None:
        return None
    c = np.asarray(poly.coeffs, dtype=complex)
    if len(c) < 3:
        return None
    cutoff = coefficient_threshold(c)
    if abs(c[0]) > cutoff or abs(c[1] - 1.0) > 1e-12 * (1.0 + abs(c[1])):
        return None
    nonzero = [k for k in range(2, len(c)) if abs(c[k]) > cutoff]
    if len(nonzero) != 1:
        return None
    n = nonzero[0]
    return complex(c[n]), n


def index(
    f: HarmonicMapping,
    z0: complex,
    *,
    series_order: int = DEFAULT_SERIES_ORDER,
    tol_singular: float = SINGULAR_BAND_TOL,
    zero_tol: float = ZERO_RESIDUAL_TOL,
    eta_tol: float = DISPATCH_ETA_TOL,
    coeff_rtol: float = COEFF_ZERO_RTOL,
    r_start: float | None = None,
    known_points=(),
) -> IndexVerdict:
    """Index of f at an exceptional point z0, by the cheapest valid route.

    Poles of h contribute -order.  Regular zeros follow the sign of
    |h'| - 1.  Singular zeros go through the series criterion; when it is
    indeterminate the pure binomial family is answered from its closed-form
    table and everything else falls back to the numeric winding oracle.
    """
    z0 = complex(z0)
    if f.h.is_rational:
        for location, order in f.h.poles():
            if abs(location - z0) <= POLE_MATCH_TOL:
                return IndexVerdict(
                    value=-order, method=IndexMethod.REGULAR_RULE, order=order
                )
    residual = abs(f(z0))
    if residual > zero_tol * (1.0 + abs(z0)):
        raise NotExceptionalError(
            f"|f({z0})| = {residual:.3e} is above tolerance and {z0} is not a pole"
        )
    point_class = classify_point(f, z0, tol=tol_singular)
    if not point_class.is_singular:
        return IndexVerdict(
            value=index_regular(point_class),
            method=IndexMethod.REGULAR_RULE,
            witness=point_class.witness,
        )

    series = taylor_at(f.h, z0, series_order)
    # Validated zero: the constant term must be conj(z0); drop it so the
    # series describes f's local expansion.
    shifted = series.with_coefficient(0, 0.0)
    notes: tuple[str, ...] = ()
    theorem: IndexVerdict | None
    try:
        theorem = index_singular_general(
            shifted,
            a1_tol=max(1e-9, 10.0 * tol_singular),
            eta_tol=eta_tol,
            coeff_rtol=coeff_rtol,
        )
    except IsolationCertificateError:
        theorem = None
        notes = ("series scan could not certify isolation; used numeric oracle",)
    if theorem is not None and not theorem.indeterminate:
        return theorem

    if theorem is not None and abs(z0) <= 1e-9:
        binomial = _binomial_form(f.h)
        if binomial is not None:
            a, n = binomial
            if abs(a.real) <= coefficient_threshold(np.array([a])):
                return IndexVerdict(
                    value=index_binomial(a, n),
                    method=IndexMethod.BINOMIAL_LEMMA,
                    n=n,
                    a_n=a,
                    theta=theorem.theta,
                    phi=theorem.phi,
                    eta=theorem.eta,
                    notes=("series criterion indeterminate; binomial table applied",),
                )

    numeric = curves.poincare_index(f, z0, r_start, known_points=known_points)
    if numeric not in (-1, 0, 1):
        raise IndexInstabilityError(
            f"numeric index {numeric} at {z0} is outside the range a zero allows"
        )
    if theorem is not None:
        notes = theorem.notes + ("series criterion indeterminate; numeric fallback",)
        return IndexVerdict(
            value=numeric,
            method=IndexMethod.NUMERIC_FALLBACK,
            n=theorem.n,
            a_n=theorem.a_n,
            theta=theorem.theta,
            phi=theorem.phi,
            eta=theorem.eta,
            notes=notes,
        )
    return IndexVerdict(value=numeric, method=IndexMethod.NUMERIC_FALLBACK, notes=notes)

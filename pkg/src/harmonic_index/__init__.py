"""Analysis of harmonic mappings f(z) = h(z) - conj(z): zeros, Poincare
indices (numeric winding oracle and Taylor-coefficient criteria),
argument-principle audits and phase portraits."""

from . import errors
from .classify import (
    IndexMethod,
    IndexVerdict,
    PointClass,
    SenseKind,
    classify_point,
    index,
    index_binomial,
    index_regular,
    index_singular_general,
    index_singular_normalized,
    rotate_to_normalized,
)
from .curves import (
    Circle,
    ClosedCurve,
    Polygon,
    WindingResult,
    auto_radius,
    is_isolated,
    large_circle_winding,
    poincare_index,
    winding,
)
from .expressions import (
    AnalyticFunction,
    format_complex,
    parse_complex,
    parse_function,
)
from .mapping import HarmonicMapping
from .polynomials import Polynomial
from .portrait import Image, Window, color_cycle_count, ppm_bytes, render, write_ppm
from .series import TruncatedSeries, coefficient_threshold, taylor_at
from .verify import AuditReport, audit_curve, audit_global
from .zeros import (
    ExceptionalPoint,
    SearchRegion,
    ZeroSearch,
    default_search_region,
    expected_global_winding,
    find_zeros,
    max_zero_bound,
    pole_points,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFunction",
    "AuditReport",
    "Circle",
    "ClosedCurve",
    "ExceptionalPoint",
    "HarmonicMapping",
    "Image",
    "IndexMethod",
    "IndexVerdict",
    "PointClass",
    "Polygon",
    "Polynomial",
    "SearchRegion",
    "SenseKind",
    "TruncatedSeries",
    "Window",
    "WindingResult",
    "ZeroSearch",
    "audit_curve",
    "audit_global",
    "auto_radius",
    "classify_point",
    "coefficient_threshold",
    "color_cycle_count",
    "default_search_region",
    "errors",
    "expected_global_winding",
    "find_zeros",
    "format_complex",
    "index",
    "index_binomial",
    "index_regular",
    "index_singular_general",
    "index_singular_normalized",
    "is_isolated",
    "large_circle_winding",
    "max_zero_bound",
    "parse_complex",
    "parse_function",
    "poincare_index",
    "pole_points",
    "ppm_bytes",
    "render",
    "rotate_to_normalized",
    "taylor_at",
    "winding",
    "write_ppm",
]

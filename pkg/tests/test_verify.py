import math

import numpy as np
import pytest

from harmonic_index import (
    AuditReport,
    Circle,
    HarmonicMapping,
    IndexMethod,
    IndexVerdict,
    Polygon,
    SearchRegion,
    audit_curve,
    audit_global,
    errors,
    find_zeros,
    pole_points,
)
from harmonic_index.zeros import ExceptionalPoint
from conftest import function_text_from_coeffs


def _all_points(f, half_width):
    search = find_zeros(f, SearchRegion(0j, half_width))
    return list(search.points) + pole_points(f)


def test_audit_curve_golden_inventory(golden):
    f = golden["plus_one"]
    points = _all_points(f, 3.0)
    report = audit_curve(f, Circle(0j, 5.0), points)
    assert report.consistent
    assert report.curve_winding == -1
    assert report.index_sum == -1
    values = sorted(p.verdict.value for p in report.points)
    assert values == [-1, -1, 1]


def test_audit_curve_ring_inventory(golden):
    f = golden["zero_ring"]
    points = _all_points(f, 2.0)
    report = audit_curve(f, Circle(0j, 4.0), points)
    assert report.consistent
    assert report.curve_winding == 3
    assert report.index_sum == 3


def test_audit_curve_empty_interior(golden):
    report = audit_curve(golden["minus_one"], Circle(5.0, 0.5), [])
    assert report.consistent
    assert report.curve_winding == 0
    assert report.index_sum == 0


def test_audit_curve_ignores_exterior_points(golden):
    f = golden["minus_one"]
    points = _all_points(f, 3.0)
    # square around just the origin: only the singular zero is interior
    square = Polygon((0.5 + 0.5j, -0.5 + 0.5j, -0.5 - 0.5j, 0.5 - 0.5j))
    report = audit_curve(f, square, points)
    assert report.curve_winding == -1
    assert report.index_sum == -1
    assert len(report.points) == 1
    assert any("outside" in note for note in report.notes)


def test_audit_curve_rejects_point_on_curve(golden):
    f = golden["minus_one"]
    points = _all_points(f, 3.0)
    with pytest.raises(errors.PointOnCurveError):
        audit_curve(f, Circle(0j, abs(points[0].location) or 1.0), points)


def test_audit_curve_rejects_unresolved_verdicts(golden):
    stub = ExceptionalPoint(
        location=0j,
        kind="zero",
        verdict=IndexVerdict(value=None, method=IndexMethod.GENERAL_THEOREM),
    )
    with pytest.raises(errors.IndeterminateVerdictError):
        audit_curve(golden["minus_one"], Circle(0j, 0.3), [stub])


def test_audit_global_golden(golden):
    report = audit_global(golden["minus_one"])
    assert report.consistent
    assert report.curve_winding == -1
    values = sorted(p.verdict.value for p in report.points)
    assert values == [-1, -1, -1, 1, 1]

    report = audit_global(golden["plus_one"])
    assert report.consistent
    assert report.curve_winding == -1
    values = sorted(p.verdict.value for p in report.points)
    assert values == [-1, -1, 1]

    report = audit_global(golden["zero_ring"])
    assert report.consistent
    assert report.curve_winding == 3


def test_audit_global_requires_covered_rational(golden):
    with pytest.raises(errors.NotRationalError):
        audit_global(golden["exp"])
    with pytest.raises(errors.UncoveredTypeError):
        audit_global(HarmonicMapping.from_text("(z^2+1)/(z-3)"))


def test_audit_global_random_growth_type():
    rng = np.random.default_rng(67)
    consistent = 0
    attempts = 0
    while consistent < 5 and attempts < 40:
        attempts += 1
        num = rng.normal(size=4) + 1j * rng.normal(size=4)
        den = rng.normal(size=2) + 1j * rng.normal(size=2)
        num[-1] += 2.0
        den[-1] += 2.0
        h_text = function_text_from_coeffs(num, den)
        try:
            f = HarmonicMapping.from_text(h_text)
            if f.h.rational_type != (3, 1):
                continue
            report = audit_global(f)
        except errors.HarmonicIndexError:
            continue
        assert report.curve_winding == 2
        assert report.consistent
        consistent += 1
    assert consistent == 5


def test_audit_report_serialization(golden):
    payload = audit_global(golden["plus_one"]).to_json()
    assert set(payload) == {"winding", "index_sum", "consistent", "points", "notes"}
    assert payload["consistent"] is True
    assert all({"z", "kind"} <= set(p) for p in payload["points"])


def test_consistency_flag_is_exactly_the_sum_comparison(golden):
    for key in ("plus_one", "minus_one", "zero_ring"):
        report = audit_global(golden[key])
        assert report.consistent == (report.curve_winding == report.index_sum)

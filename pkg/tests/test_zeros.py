import math

import numpy as np
import pytest

from harmonic_index import (
    HarmonicMapping,
    SearchRegion,
    SenseKind,
    default_search_region,
    errors,
    expected_global_winding,
    find_zeros,
    max_zero_bound,
    parse_function,
    poincare_index,
    pole_points,
)

RING_SMALL_MODULUS = math.sqrt((math.sqrt(2) - 1) / 4)


def _locations(search):
    return sorted((p.location for p in search), key=lambda z: (round(abs(z), 8), np.angle(z)))


def test_find_zeros_simple_pole_pair(golden):
    search = find_zeros(golden["minus_one"], SearchRegion(0j, 3.0))
    assert len(search) == 3
    locs = _locations(search)
    assert abs(locs[0]) < 1e-6
    assert abs(locs[1] + math.sqrt(2)) < 1e-6 or abs(locs[1] - math.sqrt(2)) < 1e-6
    assert abs(abs(locs[2]) - math.sqrt(2)) < 1e-6
    by_value = sorted(p.index_value for p in search)
    assert by_value == [-1, 1, 1]


def test_find_zeros_single_singular(golden):
    search = find_zeros(golden["plus_one"], SearchRegion(0j, 3.0))
    assert len(search) == 1
    point = search[0]
    assert abs(point.location) < 1e-6
    assert point.point_class.kind is SenseKind.SINGULAR
    assert point.index_value == 1


def test_find_zeros_ring_of_eight(golden):
    search = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0))
    assert len(search) == 8
    small = [p for p in search if abs(abs(p.location) - RING_SMALL_MODULUS) < 1e-6]
    half = [p for p in search if abs(abs(p.location) - 0.5) < 1e-6]
    assert len(small) == 4 and len(half) == 4
    assert all(p.index_value == 1 for p in small)
    assert all(p.point_class.kind is SenseKind.SENSE_PRESERVING for p in small)
    assert all(p.index_value == 0 for p in half)
    assert all(p.point_class.kind is SenseKind.SINGULAR for p in half)
    # arguments of the two rings
    small_args = sorted(np.angle(p.location) % (2 * np.pi) for p in small)
    assert np.allclose(small_args, [np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4], atol=1e-6)
    half_args = sorted(np.angle(p.location) % (2 * np.pi) for p in half)
    assert np.allclose(half_args[1:], [np.pi / 2, np.pi, 3 * np.pi / 2], atol=1e-6)
    assert half_args[0] < 1e-6 or half_args[0] > 2 * np.pi - 1e-6


def test_ring_symmetry_under_quarter_turn(golden):
    search = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0))
    locs = [p.location for p in search]
    for z in locs:
        assert min(abs(1j * z - w) for w in locs) < 1e-6
    singular = [p.location for p in search if p.point_class.kind is SenseKind.SINGULAR]
    indices = {poincare_index(golden["zero_ring"], z, 0.15) for z in singular}
    assert indices == {0}


def test_every_zero_has_tight_residual(golden):
    for key in ("plus_one", "minus_one", "zero_ring"):
        for p in find_zeros(golden[key], SearchRegion(0j, 2.5)):
            assert p.residual <= 1e-9
            assert p.isolated


def test_zeros_reproduce_under_grid_doubling(golden):
    coarse = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0, 64))
    fine = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0, 128))
    assert len(coarse) == len(fine)
    for p in coarse:
        assert min(abs(p.location - q.location) for q in fine) < 1e-6


def test_zero_count_bound(golden):
    for key in ("plus_one", "minus_one", "zero_ring"):
        h = golden[key].h
        search = find_zeros(golden[key])
        assert len(search) <= max_zero_bound(h)


def test_nonisolated_zeros_flagged():
    f = HarmonicMapping.from_text("z")  # f(z) = z - conj z vanishes on R
    search = find_zeros(f, SearchRegion(0j, 2.0, 32))
    assert len(search) >= 1
    assert all(not p.isolated for p in search)
    assert all(p.verdict is None for p in search)


def test_pole_points(golden):
    points = pole_points(golden["zero_ring"])
    assert len(points) == 1
    assert points[0].kind == "pole"
    assert points[0].order == 1
    assert points[0].verdict.value == -1


def test_exceptional_point_serialization(golden):
    search = find_zeros(golden["plus_one"], SearchRegion(0j, 2.0))
    payload = search[0].to_json()
    assert payload["kind"] == "zero"
    assert payload["class"] == "singular"
    assert payload["index"] == 1
    assert payload["method"] == "GeneralTheorem"
    assert payload["residual"] <= 1e-9


# ---------------------------------------------------------------------------
# counting facts
# ---------------------------------------------------------------------------


def test_max_zero_bound_values():
    assert max_zero_bound(parse_function("z/(z^2-1)")) == 5
    assert max_zero_bound(parse_function("(16*z^4+1)/(8*z)")) == 15
    with pytest.raises(ValueError):
        max_zero_bound(parse_function("z"))
    with pytest.raises(errors.NotRationalError):
        max_zero_bound(parse_function("exp(z)"))


def test_expected_global_winding_values():
    assert expected_global_winding(parse_function("z/(z^2-1)")) == -1
    assert expected_global_winding(parse_function("(16*z^4+1)/(8*z)")) == 3
    assert expected_global_winding(parse_function("z^5-z")) == 5
    assert expected_global_winding(parse_function("(z^2+1)/(z^2-2)")) == -1


def test_expected_global_winding_uncovered_type():
    with pytest.raises(errors.UncoveredTypeError):
        expected_global_winding(parse_function("(z^2+1)/(z-3)"))


def test_expected_global_winding_degree_requirement():
    with pytest.raises(ValueError):
        expected_global_winding(parse_function("z"))
    with pytest.raises(ValueError):
        expected_global_winding(parse_function("(z+1)/(z-1)"))
    with pytest.raises(errors.NotRationalError):
        expected_global_winding(parse_function("exp(z)"))


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


def test_search_region_validation():
    with pytest.raises(ValueError):
        SearchRegion(0j, -1.0)
    with pytest.raises(ValueError):
        SearchRegion(0j, 1.0, 4)


def test_default_region_contains_all_exceptional_points(golden):
    for key in ("plus_one", "minus_one", "zero_ring"):
        f = golden[key]
        region = default_search_region(f.h)
        for p in find_zeros(f):
            assert region.contains(p.location)
        for p, _ in f.h.poles():
            assert region.contains(p)
    with pytest.raises(errors.NotRationalError):
        default_search_region(parse_function("exp(z)"))


def test_thread_cap_env_var_gives_identical_results(golden, monkeypatch):
    baseline = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0))
    monkeypatch.setenv("HARMONIC_INDEX_THREADS", "4")
    parallel = find_zeros(golden["zero_ring"], SearchRegion(0j, 2.0))
    assert len(baseline) == len(parallel)
    for a, b in zip(baseline, parallel):
        assert a.location == b.location
        assert a.index_value == b.index_value
    monkeypatch.setenv("HARMONIC_INDEX_THREADS", "not-a-number")
    from harmonic_index.zeros import thread_cap

    assert thread_cap() == 1

import math

import numpy as np
import pytest

from harmonic_index import (
    HarmonicMapping,
    IndexMethod,
    SenseKind,
    TruncatedSeries,
    classify_point,
    errors,
    index,
    index_binomial,
    index_regular,
    index_singular_general,
    index_singular_normalized,
    parse_function,
    poincare_index,
    rotate_to_normalized,
    taylor_at,
)


# ---------------------------------------------------------------------------
# point classification
# ---------------------------------------------------------------------------


def test_classify_point_examples(golden):
    pc = classify_point(golden["minus_one"], math.sqrt(2))
    assert pc.kind is SenseKind.SENSE_PRESERVING
    assert pc.witness == pytest.approx(3.0)

    pc = classify_point(golden["zero_ring"], 0.5j)
    assert pc.kind is SenseKind.SINGULAR
    assert pc.witness == pytest.approx(1.0)

    pc = classify_point(golden["exp"], 0)
    assert pc.kind is SenseKind.SINGULAR


def test_classify_point_at_pole_raises(golden):
    with pytest.raises(errors.PoleEvaluationError):
        classify_point(golden["minus_one"], 1.0)


def test_index_regular():
    preserving = classify_point(HarmonicMapping.from_text("3*z"), 0)
    reversing = classify_point(HarmonicMapping.from_text("0.25*z"), 0)
    singular = classify_point(HarmonicMapping.from_text("z^2"), 0.5)
    assert index_regular(preserving) == 1
    assert index_regular(reversing) == -1
    with pytest.raises(errors.SingularInputError):
        index_regular(singular)


# ---------------------------------------------------------------------------
# normalized criterion
# ---------------------------------------------------------------------------


def _series(coeffs):
    return TruncatedSeries(0, coeffs)


@pytest.mark.parametrize(
    "coeffs,expected_value,expected_n",
    [
        ([0, 1, 0.5, 0, 0], 0, 2),
        ([0, 1, 0, 1, 0], 1, 3),
        ([0, 1, 0, -1, 0], -1, 3),
        ([0, 1, 1j, 0, 0], None, 2),
    ],
)
def test_normalized_criterion(coeffs, expected_value, expected_n):
    verdict = index_singular_normalized(_series(coeffs))
    assert verdict.value == expected_value
    assert verdict.n == expected_n
    assert verdict.method is IndexMethod.NORMALIZED_THEOREM
    assert verdict.indeterminate is (expected_value is None)


def test_normalized_requires_unit_first_coefficient():
    with pytest.raises(errors.NormalizationError):
        index_singular_normalized(_series([0, -1, 0, 1]))
    with pytest.raises(errors.NormalizationError):
        index_singular_normalized(_series([0.5, 1, 0, 1]))


def test_normalized_rejects_vanishing_tail():
    with pytest.raises(errors.IsolationCertificateError):
        index_singular_normalized(_series([0, 1, 0, 0, 0]))


# ---------------------------------------------------------------------------
# general criterion
# ---------------------------------------------------------------------------


def test_general_criterion_on_ring_example(golden):
    series = taylor_at(golden["zero_ring"].h, 0.5j, 6).with_coefficient(0, 0.0)
    verdict = index_singular_general(series)
    assert verdict.value == 0
    assert verdict.n == 2
    assert verdict.theta == pytest.approx(math.pi)
    assert verdict.phi == pytest.approx(math.pi / 2)
    assert verdict.eta == pytest.approx(-1.0)


def test_general_reduces_to_normalized_when_a1_is_one():
    rng = np.random.default_rng(53)
    for _ in range(20):
        coeffs = np.zeros(8, dtype=complex)
        coeffs[1] = 1.0
        tail = rng.normal(size=6) + 1j * rng.normal(size=6)
        coeffs[2:] = np.where(np.abs(tail) < 0.2, tail + 0.5, tail)
        series = _series(coeffs)
        general = index_singular_general(series)
        normalized = index_singular_normalized(series)
        assert general.value == normalized.value
        assert general.n == normalized.n


def test_general_agrees_with_rotated_normalization():
    rng = np.random.default_rng(59)
    for _ in range(20):
        theta = float(rng.uniform(-np.pi, np.pi))
        coeffs = np.zeros(7, dtype=complex)
        coeffs[1] = np.exp(1j * theta)
        tail = rng.normal(size=5) + 1j * rng.normal(size=5)
        coeffs[2:] = np.where(np.abs(tail) < 0.2, tail + 0.5, tail)
        series = _series(coeffs)
        general = index_singular_general(series)
        normalized = index_singular_normalized(rotate_to_normalized(series))
        assert general.value == normalized.value
        assert general.n == normalized.n


def test_general_verdict_verified_by_numeric_oracle():
    # rotated binomials: h(z) = e^{i theta} z + a z^n
    rng = np.random.default_rng(61)
    checked = 0
    while checked < 8:
        theta = float(rng.uniform(-np.pi, np.pi))
        n = int(rng.integers(2, 5))
        a = complex(*rng.uniform(-1, 1, 2))
        if abs(a) < 0.3:
            continue
        e = np.exp(1j * theta)
        f = lambda z, e=e, a=a, n=n: e * z + a * z**n - np.conj(z)
        series = _series(
            [0, e] + [0] * (n - 2) + [a] + [0] * (8 - n - 1)
        )
        verdict = index_singular_general(series)
        if verdict.indeterminate or abs(verdict.eta) < 1e-2:
            continue
        assert verdict.value == poincare_index(f, 0)
        checked += 1


# ---------------------------------------------------------------------------
# binomial family table
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "a,n,expected",
    [
        (1, 2, 0),
        (1j, 4, 1),
        (-1, 3, -1),
        (1j, 3, 1),
        (-1j, 2, 1),
        (2 + 1j, 3, 1),
        (-0.5 + 1j, 5, -1),
    ],
)
def test_index_binomial_table(a, n, expected):
    assert index_binomial(a, n) == expected


def test_index_binomial_rejects_zero():
    with pytest.raises(ValueError):
        index_binomial(0, 3)


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------


def test_index_at_poles(golden):
    verdict = index(golden["minus_one"], 1.0)
    assert verdict.value == -1
    assert verdict.method is IndexMethod.REGULAR_RULE
    assert verdict.order == 1
    verdict = index(golden["zero_ring"], 0)
    assert verdict.value == -1


def test_index_regular_zero(golden):
    verdict = index(golden["minus_one"], math.sqrt(2))
    assert verdict.value == 1
    assert verdict.method is IndexMethod.REGULAR_RULE
    assert verdict.witness == pytest.approx(3.0)


def test_index_rejects_non_exceptional_points(golden):
    with pytest.raises(errors.NotExceptionalError):
        index(golden["minus_one"], 5.0)


def test_index_ambiguous_pair_uses_numeric_fallback():
    f1 = HarmonicMapping.from_text("-z^3+i*z^2+z")
    f2 = HarmonicMapping.from_text("-20*z^3+i*z^2+z")
    v1 = index(f1, 0)
    v2 = index(f2, 0)
    assert (v1.value, v2.value) == (1, -1)
    assert v1.method is IndexMethod.NUMERIC_FALLBACK
    assert v2.method is IndexMethod.NUMERIC_FALLBACK
    assert any("indeterminate" in note for note in v1.notes)
    # the first two coefficients alone really were indeterminate
    for f in (f1, f2):
        series = taylor_at(f.h, 0, 8).with_coefficient(0, 0.0)
        assert index_singular_general(series).indeterminate


def test_index_binomial_dispatch_instead_of_fallback():
    f = HarmonicMapping.from_text("z + i*z^2")
    verdict = index(f, 0)
    assert verdict.method is IndexMethod.BINOMIAL_LEMMA
    assert verdict.value == 1
    assert verdict.value == poincare_index(f, 0)
    # same family, odd power, negative imaginary coefficient
    g = HarmonicMapping.from_text("z - 2i*z^3")
    verdict = index(g, 0)
    assert verdict.method is IndexMethod.BINOMIAL_LEMMA
    assert verdict.value == 1 == poincare_index(g, 0)


def test_index_theorem_agrees_with_numeric_on_golden_zeros(golden):
    cases = [
        (golden["plus_one"], 0j),
        (golden["minus_one"], 0j),
        (golden["minus_one"], math.sqrt(2)),
        (golden["minus_one"], -math.sqrt(2)),
        (golden["zero_ring"], 0.5j),
        (golden["zero_ring"], 0.5),
        (golden["exp"], 0j),
    ]
    for f, z0 in cases:
        verdict = index(f, z0)
        assert verdict.method is not IndexMethod.NUMERIC_FALLBACK
        assert verdict.value == poincare_index(f, z0)


def test_all_zero_verdicts_in_allowed_range(golden):
    values = []
    for f, z0 in [
        (golden["plus_one"], 0j),
        (golden["minus_one"], math.sqrt(2)),
        (golden["zero_ring"], 0.5j),
        (golden["exp"], 0j),
        (HarmonicMapping.from_text("-z^3+i*z^2+z"), 0j),
    ]:
        values.append(index(f, z0).value)
    assert set(values) <= {-1, 0, 1}


def test_verdict_serialization(golden):
    payload = index(golden["exp"], 0).to_json()
    assert payload["value"] == 0
    assert payload["method"] == "GeneralTheorem"
    assert payload["n"] == 2
    assert payload["a_n"] == pytest.approx([0.5, 0.0])

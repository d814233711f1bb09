"""Windings along closed curves and Poincare indices by shrinking circles.

This module is the theorem-independent numeric oracle.  ``winding`` tracks a
continuous branch of arg f along a closed curve by accumulating per-step
phase deltas arg(f(z_{k+1})/f(z_k)); any step of at least pi/3 triggers
bisection of the parameter interval, so a full turn can never alias between
samples.  The telescoped sum divided by 2*pi must land within a quarter turn
of an integer or the computation is rejected rather than rounded.

``winding`` accepts any callable C -> C that handles numpy arrays;
HarmonicMapping is the main client but plain lambdas work for testing
arbitrary continuous functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BisectionLimitError,
    IndexInstabilityError,
    NonFiniteOnCurveError,
    NonIsolatedZeroError,
    NotRationalError,
    PhaseRoundingError,
    ZeroOnCurveError,
)

PHASE_STEP_BOUND = np.pi / 3.0
INITIAL_SAMPLES = 256
MAX_BISECTION_LEVELS = 24
ZERO_ON_CURVE_RTOL = 1e-12
ROUNDING_TOL = 0.25

# Non-isolation: this many consecutive halved radii with min |f| < rtol * r.
NONISOLATION_LEVELS = 5
NONISOLATION_RTOL = 1e-9

MAX_INDEX_HALVINGS = 40
DEFAULT_INDEX_RADIUS = 0.1


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    """Positively oriented circle; ``start_angle`` moves the parameter origin."""

    center: complex
    radius: float
    start_angle: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")

    def point(self, t):
        angle = self.start_angle + 2.0 * np.pi * np.asarray(t, dtype=float)
        return self.center + self.radius * np.exp(1j * angle)

    def distance_to(self, p: complex) -> float:
        return abs(abs(p - self.center) - self.radius)


@dataclass(frozen=True)
class Polygon:
    """Simple closed polygon, positively oriented, vertices in order."""

    vertices: tuple[complex, ...]

    def __post_init__(self):
        vs = tuple(complex(v) for v in self.vertices)
        if len(vs) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", vs)
        if self._self_intersects():
            raise ValueError("polygon is not simple (edges intersect)")

    def _edges(self):
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]

    def _self_intersects(self) -> bool:
        edges = self._edges()
        n = len(edges)
        for i in range(n):
            a1, a2 = edges[i]
            if a1 == a2:
                return True
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue  # adjacent edges share a vertex
                b1, b2 = edges[j]
                if _segments_cross(a1, a2, b1, b2):
                    return True
        return False

    def point(self, t):
        t = np.asarray(t, dtype=float)
        vs = np.asarray(self.vertices, dtype=complex)
        n = len(vs)
        s = np.clip(t, 0.0, 1.0) * n
        k = np.minimum(s.astype(int), n - 1)
        frac = s - k
        start = vs[k]
        end = vs[(k + 1) % n]
        return start + frac * (end - start)

    def distance_to(self, p: complex) -> float:
        return min(_point_segment_distance(p, a, b) for a, b in self._edges())


ClosedCurve = Circle | Polygon


def _orient(a: complex, b: complex, c: complex) -> float:
    return (b.real - a.real) * (c.imag - a.imag) - (b.imag - a.imag) * (c.real - a.real)


def _segments_cross(a1, a2, b1, b2) -> bool:
    d1 = _orient(b1, b2, a1)
    d2 = _orient(b1, b2, a2)
    d3 = _orient(a1, a2, b1)
    d4 = _orient(a1, a2, b2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _point_segment_distance(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return abs(p - a)
    t = ((p - a).real * ab.real + (p - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


# ---------------------------------------------------------------------------
# winding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WindingResult:
    """An accepted winding: integral value plus sampling diagnostics."""

    value: int
    total_phase: float
    samples_used: int
    min_modulus_on_curve: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "total_phase": self.total_phase,
            "samples_used": self.samples_used,
            "min_modulus_on_curve": self.min_modulus_on_curve,
        }


def winding(
    func,
    curve: ClosedCurve,
    *,
    initial_samples: int = INITIAL_SAMPLES,
    max_bisections: int = MAX_BISECTION_LEVELS,
) -> WindingResult:
    """Winding of ``func`` along ``curve`` by adaptive argument tracking."""
    t = np.linspace(0.0, 1.0, initial_samples + 1)
    values = np.asarray(func(curve.point(t)), dtype=complex)
    _check_samples(values)
    for level in range(max_bisections + 1):
        steps = np.angle(values[1:] / values[:-1])
        bad = np.abs(steps) >= PHASE_STEP_BOUND
        if not bad.any():
            break
        if level == max_bisections:
            raise BisectionLimitError(
                "phase steps stayed above pi/3 after "
                f"{max_bisections} bisection levels; move the curve away from zeros"
            )
        idx = np.nonzero(bad)[0]
        t_mid = 0.5 * (t[idx] + t[idx + 1])
        v_mid = np.asarray(func(curve.point(t_mid)), dtype=complex)
        t = np.insert(t, idx + 1, t_mid)
        values = np.insert(values, idx + 1, v_mid)
        _check_samples(values)
    total = float(steps.sum())
    turns = total / (2.0 * np.pi)
    value = int(round(turns))
    if abs(turns - value) >= ROUNDING_TOL:
        raise PhaseRoundingError(
            f"accumulated phase {turns:.4f} turns is not within "
            f"{ROUNDING_TOL} of an integer"
        )
    return WindingResult(
        value=value,
        total_phase=total,
        samples_used=len(values),
        min_modulus_on_curve=float(np.abs(values).min()),
    )


def _check_samples(values: np.ndarray) -> None:
    finite = np.isfinite(values.real) & np.isfinite(values.imag)
    if not finite.all():
        raise NonFiniteOnCurveError("curve crosses a point where f is undefined")
    mods = np.abs(values)
    scale = float(mods.max())
    min_mod = float(mods.min())
    if scale == 0.0 or min_mod < ZERO_ON_CURVE_RTOL * scale:
        raise ZeroOnCurveError(min_mod)


def _min_modulus_on_circle(func, center: complex, radius: float, samples: int = 256) -> float:
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    values = np.asarray(func(center + radius * np.exp(2j * np.pi * t)), dtype=complex)
    mods = np.abs(values)
    mods = mods[np.isfinite(mods)]
    return float(mods.min()) if mods.size else float("inf")


def is_isolated(func, z0: complex, r_start: float = DEFAULT_INDEX_RADIUS) -> bool:
    """Non-isolation scan: False when min |f| < NONISOLATION_RTOL * r on
    every one of NONISOLATION_LEVELS consecutively halved circles, the
    signature of a zero curve crossing every circle."""
    r = float(r_start)
    for _ in range(NONISOLATION_LEVELS):
        if not _min_modulus_on_circle(func, complex(z0), r) < NONISOLATION_RTOL * r:
            return True
        r *= 0.5
    return False


def auto_radius(z0: complex, known_points=(), default: float = DEFAULT_INDEX_RADIUS) -> float:
    """Half the distance to the nearest other known exceptional point."""
    distances = [abs(complex(p) - complex(z0)) for p in known_points]
    distances = [d for d in distances if d > 1e-12]
    if not distances:
        return default
    return 0.5 * min(distances)


def poincare_index(
    func,
    z0: complex,
    r_start: float | None = None,
    *,
    known_points=(),
    max_halvings: int = MAX_INDEX_HALVINGS,
) -> int:
    """Index at an isolated exceptional point by windings on shrinking circles.

    Computes windings at radii r, r/2, r/4, ... and accepts as soon as two
    consecutive radii yield the same integer.  Radii where the winding fails
    (zero on curve, refinement cap) break the agreement chain but still feed
    the non-isolation detector.
    """
    z0 = complex(z0)
    r = float(r_start) if r_start is not None else auto_radius(z0, known_points)
    if not r > 0:
        raise ValueError("starting radius must be positive")
    previous: int | None = None
    consecutive_small = 0
    for _ in range(max_halvings + 1):
        min_mod: float | None
        try:
            result = winding(func, Circle(z0, r))
            min_mod = result.min_modulus_on_curve
            value: int | None = result.value
        except ZeroOnCurveError as exc:
            min_mod = exc.min_modulus
            value = None
        except (BisectionLimitError, PhaseRoundingError, NonFiniteOnCurveError):
            min_mod = _min_modulus_on_circle(func, z0, r)
            value = None
        if min_mod is not None and min_mod < NONISOLATION_RTOL * r:
            consecutive_small += 1
            if consecutive_small >= NONISOLATION_LEVELS:
                raise NonIsolatedZeroError(
                    f"min |f| stayed below {NONISOLATION_RTOL} * r on "
                    f"{NONISOLATION_LEVELS} consecutive circles around {z0}"
                )
        else:
            consecutive_small = 0
        if value is not None:
            if previous is not None and previous == value:
                return value
            previous = value
        else:
            previous = None
        r *= 0.5
    raise IndexInstabilityError(
        f"no two consecutive radii agreed within {max_halvings} halvings at {z0}"
    )


def large_circle_winding(func, R: float | None = None, *, known_points=()) -> int:
    """Winding on a circle enclosing all exceptional points.

    With explicit ``R`` just computes that winding.  Otherwise ``func`` must
    be a HarmonicMapping whose analytic part is rational of degree >= 2; the
    radius starts at 2 * (1 + max modulus of numerator/denominator roots) and
    doubles until two consecutive radii agree.
    """
    if R is not None:
        return winding(func, Circle(0j, float(R))).value
    h = getattr(func, "h", None)
    if h is None or not h.is_rational:
        raise NotRationalError("automatic radius requires a rational analytic part")
    if h.degree < 2:
        raise NotRationalError("automatic radius requires degree >= 2")
    points = list(known_points)
    if not points:
        points = list(h.numerator.roots()) + list(h.denominator.roots())
    max_mod = max((abs(p) for p in points), default=0.0)
    r = 2.0 * (1.0 + max_mod)
    previous = winding(func, Circle(0j, r)).value
    for _ in range(16):
        r *= 2.0
        current = winding(func, Circle(0j, r)).value
        if current == previous:
            return current
        previous = current
    raise IndexInstabilityError("winding did not stabilize under radius doubling")

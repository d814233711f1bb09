"""Zero location for f(z) = h(z) - conj(z) by grid seeding plus damped Newton.

f is not complex-analytic, but its zeros solve the real 2x2 system
(Re f, Im f) = 0 whose Jacobian assembles from the Wirtinger pair
df/dz = h' and df/dz' = -1:

    J = [[Re h' - 1, -Im h'], [Im h', Re h' + 1]],   det J = |h'|^2 - 1.

Singular zeros make det J vanish, so on numerically rank-deficient Jacobians
the step switches to a Levenberg-Marquardt regularized least-squares step, a
descent direction on |f|^2, with the same halving rule.  Seeds come from
three sources: an algebraic candidate polynomial (complete for rational h),
predicted rings next to small-residue poles, and local minima of |f| on a
square grid.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import classify, curves
from .errors import HarmonicIndexError, NotRationalError, UncoveredTypeError
from .expressions import AnalyticFunction
from .mapping import HarmonicMapping
from .polynomials import Polynomial

# The Newton step degrades to a regularized least-squares step only when the
# Jacobian determinant is negligible relative to the Jacobian's own scale;
# an absolute gate stalls inside the flat valleys that singular zeros carry.
NEWTON_SINGULAR_RTOL = 1e-14
NEWTON_LM_RTOL = 1e-12
NEWTON_MAX_ITER = 120
NEWTON_MAX_DAMPINGS = 20
CONVERGENCE_RTOL = 1e-11
# Candidates closer than this merge into one zero.  Newton positions along
# the flat valley of a singular zero bottom out near the float cancellation
# floor (~1e-7), well below the minimum zero separation of interest (>= 0.2).
DEDUPE_TOL = 1e-6
RESIDUAL_LIMIT = 1e-9
# Taylor coefficients of h recentered at a *found* zero carry recentering
# noise of order (position error) * (neighbor coefficient); the first-nonzero
# scan for found zeros must ignore relative magnitudes below this.
FOUND_ZERO_COEFF_RTOL = 1e-5
DEFAULT_GRID = 64
DEFAULT_MAX_SEEDS = 256

THREADS_ENV = "HARMONIC_INDEX_THREADS"


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SearchRegion:
    """Square window: center +/- half_width on each axis, grid^2 seeds."""

    center: complex = 0j
    half_width: float = 2.0
    grid: int = DEFAULT_GRID

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.grid < 8:
            raise ValueError("grid must be at least 8 points per axis")

    def contains(self, z: complex, slack: float = 1e-9) -> bool:
        return (
            abs(z.real - self.center.real) <= self.half_width + slack
            and abs(z.imag - self.center.imag) <= self.half_width + slack
        )


@dataclass(frozen=True)
class ExceptionalPoint:
    """A located zero or pole with class, index verdict and diagnostics."""

    location: complex
    kind: str  # "zero" | "pole"
    point_class: classify.PointClass | None = None
    order: int | None = None
    verdict: classify.IndexVerdict | None = None
    residual: float | None = None
    isolated: bool = True

    @property
    def index_value(self) -> int | None:
        return None if self.verdict is None else self.verdict.value

    def to_json(self) -> dict:
        out: dict = {
            "z": [self.location.real, self.location.imag],
            "kind": self.kind,
        }
        if self.point_class is not None:
            out["class"] = self.point_class.kind.value
            out["witness"] = self.point_class.witness
        if self.order is not None:
            out["order"] = self.order
        if self.verdict is not None:
            out["index"] = self.verdict.value
            out["method"] = self.verdict.method.value
        if self.residual is not None:
            out["residual"] = self.residual
        if not self.isolated:
            out["isolated"] = False
        return out


@dataclass
class ZeroSearch:
    """find_zeros result: the points plus a completeness flag."""

    points: list[ExceptionalPoint]
    complete: bool = True
    notes: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, item):
        return self.points[item]


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------


def _refine(f: HarmonicMapping, z: complex) -> tuple[complex, float, bool]:
    """Damped Newton / regularized least squares from seed ``z``.

    Returns (point, |f(point)|, converged); iterates past the acceptance
    threshold while |f| keeps dropping so flat (singular) directions are
    polished well below the dedupe scale.
    """

    def safe_abs_f(w: complex) -> float:
        try:
            return abs(f(w))
        except HarmonicIndexError:
            return float("inf")

    fz = safe_abs_f(z)
    for _ in range(NEWTON_MAX_ITER):
        if not np.isfinite(fz):
            return z, fz, False
        try:
            hp = f.h_prime.eval(z)
            value = f(z)
        except HarmonicIndexError:
            return z, fz, False
        u, v = value.real, value.imag
        a, b = hp.real - 1.0, -hp.imag
        c, d = hp.imag, hp.real + 1.0
        det = a * d - b * c  # equals |h'|^2 - 1
        jac_scale = a * a + b * b + c * c + d * d
        if abs(det) >= NEWTON_SINGULAR_RTOL * max(jac_scale, 1e-30):
            dx = (-u * d + v * b) / det
            dy = (-v * a + u * c) / det
        else:
            # Descent on |f|^2: Levenberg-Marquardt regularized normal
            # equations, used only when the Jacobian is numerically rank
            # deficient (seed sitting on the critical curve).
            lam = NEWTON_LM_RTOL * max(jac_scale, 1e-30)
            g1 = a * u + c * v
            g2 = b * u + d * v
            m11 = a * a + c * c + lam
            m12 = a * b + c * d
            m22 = b * b + d * d + lam
            det_m = m11 * m22 - m12 * m12
            dx = -(m22 * g1 - m12 * g2) / det_m
            dy = -(m11 * g2 - m12 * g1) / det_m
        step = complex(dx, dy)
        accepted = False
        for _ in range(NEWTON_MAX_DAMPINGS + 1):
            candidate = z + step
            f_candidate = safe_abs_f(candidate)
            if f_candidate < fz:
                z, fz = candidate, f_candidate
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    try:
        hp_final = abs(f.h_prime.eval(z))
    except HarmonicIndexError:
        hp_final = 0.0
    converged = fz <= CONVERGENCE_RTOL * (1.0 + hp_final)
    return z, fz, converged


def _grid_seeds(f: HarmonicMapping, region: SearchRegion) -> list[complex]:
    g = region.grid
    xs = np.linspace(region.center.real - region.half_width,
                     region.center.real + region.half_width, g)
    ys = np.linspace(region.center.imag - region.half_width,
                     region.center.imag + region.half_width, g)
    zg = xs[None, :] + 1j * ys[:, None]
    values = f(zg)
    mods = np.abs(values)
    mods[~np.isfinite(mods)] = np.inf
    padded = np.full((g + 2, g + 2), np.inf)
    padded[1:-1, 1:-1] = mods
    # Non-strict comparison: mirror-symmetric |f| produces exact ties across
    # a symmetry line between grid rows, which must not suppress the seeds.
    is_min = np.ones((g, g), dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbor = padded[1 + di : g + 1 + di, 1 + dj : g + 1 + dj]
            is_min &= mods <= neighbor
    is_min &= np.isfinite(mods)
    seeds = zg[is_min]
    order = np.argsort(mods[is_min])
    return [complex(s) for s in seeds[order]]


def _algebraic_seeds(f: HarmonicMapping, region: SearchRegion) -> list[complex]:
    """Complete candidate set for rational h via conjugate elimination.

    A zero satisfies conj(z) = h(z); conjugating gives z = hbar(h(z)) with
    hbar the coefficient-conjugate of h.  Clearing q(z)^d turns that into
    one polynomial z*B(z) - A(z) = 0 of degree <= d^2 + 1 whose roots
    contain every zero of f (plus spurious conjugation 2-cycles, which the
    Newton refinement discards).  Skipped for high degree, where the
    expanded coefficients lose accuracy, and when the polynomial collapses
    to zero (degenerate h with non-isolated zero sets).
    """
    if not f.h.is_rational:
        return []
    d = f.h.degree
    if d < 1 or d > 8:
        return []
    p, q = f.h.numerator, f.h.denominator
    p_bar = Polynomial(tuple(np.conj(p.coeffs)))
    q_bar = Polynomial(tuple(np.conj(q.coeffs)))
    q_powers = [Polynomial.constant(1.0)]
    p_powers = [Polynomial.constant(1.0)]
    for _ in range(d):
        q_powers.append(q_powers[-1] * q)
        p_powers.append(p_powers[-1] * p)
    a_poly = Polynomial.constant(0.0)
    b_poly = Polynomial.constant(0.0)
    for k, coeff in enumerate(p_bar.coeffs):
        a_poly = a_poly + (p_powers[k] * q_powers[d - k]).scaled(coeff)
    for k, coeff in enumerate(q_bar.coeffs):
        b_poly = b_poly + (p_powers[k] * q_powers[d - k]).scaled(coeff)
    candidate = Polynomial.identity() * b_poly - a_poly
    if candidate.is_zero or candidate.degree == 0:
        return []
    roots = candidate.roots()
    keep = []
    for r in roots:
        r = complex(r)
        if not (np.isfinite(r.real) and np.isfinite(r.imag)):
            continue
        if region.contains(r):
            keep.append(r)
    return keep


def _pole_vicinity_seeds(f: HarmonicMapping, region: SearchRegion) -> list[complex]:
    """Predicted zeros hiding next to poles.

    Near a pole p of order m with leading coefficient c, solving
    c/(z-p)^m = conj(z) ~ conj(p) puts candidate zeros on a ring of radius
    |c/p|^(1/m) around p.  Small residues shrink that ring below the grid
    resolution, so these seeds are planted explicitly.
    """
    if not f.h.is_rational or f.h.denominator.degree == 0:
        return []
    num, den = f.h.numerator, f.h.denominator
    poles = den.roots_with_multiplicity()
    seeds: list[complex] = []
    for p, m in poles:
        rest = den.leading
        for q, mq in poles:
            if q is p:
                continue
            rest *= (p - q) ** mq
        if rest == 0:
            continue
        c = num(p) / rest
        if not np.isfinite(c.real) or not np.isfinite(c.imag) or c == 0:
            continue
        if abs(p) > 1e-6:
            base = c / p.conjugate()
            radius = abs(base) ** (1.0 / m)
            args = (np.angle(base) + 2.0 * np.pi * np.arange(m)) / m
            ring = [p + radius * np.exp(1j * t) for t in args]
        else:
            radius = abs(c) ** (1.0 / (m + 1))
            args = 2.0 * np.pi * np.arange(m + 1) / (m + 1)
            ring = [p + radius * np.exp(1j * t) for t in args]
        seeds.extend(complex(s) for s in ring if region.contains(complex(s)))
    return seeds


def default_search_region(h: AnalyticFunction, grid: int = DEFAULT_GRID) -> SearchRegion:
    """Region centered at 0 sized from the moduli of num/den roots, grown
    until a sampled circle check rules out zeros on or beyond the boundary
    (|h| strictly below or strictly above |z| everywhere on the circle)."""
    if not h.is_rational:
        raise NotRationalError("default region requires a rational analytic part")
    moduli = [abs(r) for r in h.numerator.roots()] + [
        abs(r) for r in h.denominator.roots()
    ]
    half_width = 2.0 * (1.0 + max(moduli, default=0.0))
    t = np.linspace(0.0, 1.0, 512, endpoint=False)
    for _ in range(10):
        ring = half_width * np.exp(2j * np.pi * t)
        with np.errstate(all="ignore"):
            hv = np.abs(h.eval_array(ring))
        hv = hv[np.isfinite(hv)]
        if hv.size and (hv.max() < 0.95 * half_width or hv.min() > 1.05 * half_width):
            break
        half_width *= 1.5
    return SearchRegion(0j, half_width, grid)


def find_zeros(
    f: HarmonicMapping,
    region: SearchRegion | None = None,
    *,
    max_seeds: int = DEFAULT_MAX_SEEDS,
    series_order: int = classify.DEFAULT_SERIES_ORDER,
    class_tol: float = classify.DISPATCH_CLASS_TOL,
) -> ZeroSearch:
    """All isolated zeros of f inside the region, classified and indexed."""
    if region is None:
        region = default_search_region(f.h)
    notes: list[str] = []
    complete = True
    seeds = (
        _algebraic_seeds(f, region)
        + _pole_vicinity_seeds(f, region)
        + _grid_seeds(f, region)
    )
    if len(seeds) > max_seeds:
        notes.append(
            f"seed budget exceeded: refining {max_seeds} of {len(seeds)} seeds"
        )
        complete = False
        seeds = seeds[:max_seeds]

    workers = thread_cap()
    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            refined = list(pool.map(lambda s: _refine(f, s), seeds))
    else:
        refined = [_refine(f, s) for s in seeds]

    candidates: list[tuple[complex, float]] = []
    for z, residual, converged in refined:
        if not converged or not region.contains(z):
            continue
        candidates.append((z, residual))
    candidates.sort(key=lambda item: item[1])
    kept: list[tuple[complex, float]] = []
    for z, residual in candidates:
        if all(abs(z - other) > DEDUPE_TOL for other, _ in kept):
            kept.append((z, residual))

    pole_locations: list[complex] = []
    if f.h.is_rational:
        pole_locations = [p for p, _ in f.h.poles()]
    locations = [z for z, _ in kept]

    points: list[ExceptionalPoint] = []
    for z, residual in kept:
        others = [w for w in locations if w is not z] + pole_locations
        point_class = classify.classify_point(f, z, tol=class_tol)
        r_scan = curves.auto_radius(z, others)
        if not curves.is_isolated(f, z, r_scan):
            points.append(
                ExceptionalPoint(
                    location=z,
                    kind="zero",
                    point_class=point_class,
                    residual=residual,
                    isolated=False,
                )
            )
            notes.append(f"non-isolated zero detected near {z}")
            continue
        verdict = classify.index(
            f,
            z,
            series_order=series_order,
            tol_singular=class_tol,
            coeff_rtol=FOUND_ZERO_COEFF_RTOL,
            known_points=others,
        )
        points.append(
            ExceptionalPoint(
                location=z,
                kind="zero",
                point_class=point_class,
                verdict=verdict,
                residual=residual,
            )
        )
    return ZeroSearch(points=points, complete=complete, notes=notes)


def pole_points(f: HarmonicMapping) -> list[ExceptionalPoint]:
    """Poles of h packaged as exceptional points with index -order."""
    points = []
    for location, order in f.h.poles():
        verdict = classify.IndexVerdict(
            value=-order, method=classify.IndexMethod.REGULAR_RULE, order=order
        )
        points.append(
            ExceptionalPoint(
                location=location, kind="pole", order=order, verdict=verdict
            )
        )
    return points


# ---------------------------------------------------------------------------
# global counting facts for rational h
# ---------------------------------------------------------------------------


def max_zero_bound(h: AnalyticFunction) -> int:
    """Upper bound 5*(n-1) on the number of zeros, n = degree of rational h."""
    if not h.is_rational:
        raise NotRationalError("zero bound requires a rational analytic part")
    n = h.degree
    if n < 2:
        raise ValueError("zero bound requires degree at least 2")
    return 5 * (n - 1)


def expected_global_winding(h: AnalyticFunction) -> int:
    """Winding of f on a circle enclosing every exceptional point.

    Covered rational types: (j, n) with j <= n gives -1; (k+n, k) with
    n >= 2 gives n (polynomials of degree >= 2 included).  The remaining
    type, numerator degree = denominator degree + 1, has no formula.
    """
    if not h.is_rational:
        raise NotRationalError("global winding requires a rational analytic part")
    j, k = h.rational_type
    if max(j, k) < 2:
        raise ValueError("global winding requires degree at least 2")
    if j <= k:
        return -1
    if j - k >= 2:
        return j - k
    raise UncoveredTypeError(
        f"rational type ({j}, {k}) with numerator degree = denominator degree + 1 "
        "has no global winding formula"
    )

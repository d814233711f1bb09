"""Dense complex polynomials with a Durand-Kerner root solver.

Coefficients are stored in ascending order (a_0, a_1, ..., a_n) with the
leading coefficient nonzero, except for the zero polynomial which is stored
as the single coefficient (0,).  Degrees stay small here (tens at most), so
simultaneous-iteration root finding is adequate and derivative-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Trailing coefficients below TRIM_RTOL * max|coeff| are treated as zero.
TRIM_RTOL = 1e-12
ROOT_CLUSTER_TOL = 1e-7
DK_STEP_TOL = 1e-12
DK_MAX_ITER = 500


def _trimmed(coeffs) -> tuple[complex, ...]:
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    scale = float(np.abs(c).max())
    cutoff = TRIM_RTOL * scale
    last = c.size - 1
    while last > 0 and abs(c[last]) <= cutoff:
        last -= 1
    c = c[: last + 1]
    if c.size == 1 and abs(c[0]) <= cutoff:
        return (0j,)
    return tuple(complex(v) for v in c)


@dataclass(frozen=True)
class Polynomial:
    """Immutable dense polynomial over the complex numbers."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trimmed(self.coeffs))

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @classmethod
    def constant(cls, value: complex) -> "Polynomial":
        return cls((complex(value),))

    @classmethod
    def identity(cls) -> "Polynomial":
        return cls((0j, 1 + 0j))

    @classmethod
    def from_roots(cls, roots, leading: complex = 1.0) -> "Polynomial":
        c = np.array([complex(leading)])
        for r in roots:
            c = np.convolve(c, np.array([-complex(r), 1.0]))
        return cls(tuple(c))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Polynomial(tuple(a))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        a[: len(other.coeffs)] -= other.coeffs
        return Polynomial(tuple(a))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(tuple(np.convolve(self.coeffs, other.coeffs)))

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(tuple(np.asarray(self.coeffs) * complex(factor)))

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial.constant(0.0)
        c = np.asarray(self.coeffs[1:]) * np.arange(1, len(self.coeffs))
        return Polynomial(tuple(c))

    def power(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        result = Polynomial.constant(1.0)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; works on scalars and numpy arrays alike."""
        if isinstance(z, np.ndarray):
            acc = np.full_like(z, self.coeffs[-1], dtype=complex)
            for c in reversed(self.coeffs[:-1]):
                acc = acc * z + c
            return acc
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    # -- roots -------------------------------------------------------------

    def roots(self) -> np.ndarray:
        """All roots (with repetition), via Durand-Kerner iteration."""
        return durand_kerner(self)

    def roots_with_multiplicity(self) -> list[tuple[complex, int]]:
        """Roots grouped by proximity, each polished on the appropriate
        derivative so multiple roots regain full accuracy."""
        raw = self.roots()
        clusters = cluster_points(raw, ROOT_CLUSTER_TOL)
        polished = [(self._polish_root(z, m), m) for z, m in clusters]
        # Polishing can pull under-split clusters together; merge once more.
        merged = cluster_points(
            np.array([z for z, m in polished for _ in range(m)], dtype=complex),
            ROOT_CLUSTER_TOL,
        )
        if len(merged) != len(polished):
            return [(self._polish_root(z, m), m) for z, m in merged]
        return polished

    def _polish_root(self, z0: complex, multiplicity: int) -> complex:
        # A root of multiplicity m is a simple root of the (m-1)-th derivative.
        p = self
        for _ in range(multiplicity - 1):
            p = p.derivative()
        dp = p.derivative()
        z = z0
        for _ in range(12):
            dv = dp(z)
            if dv == 0:
                break
            step = p(z) / dv
            z = z - step
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                break
        return z


def durand_kerner(poly: Polynomial) -> np.ndarray:
    """Simultaneous root iteration for all roots of ``poly``.

    Initial guesses sit on a circle of radius 1 + max |c_k / c_n| with a
    fixed angular offset to break axis symmetry; iteration stops when the
    largest correction falls below DK_STEP_TOL.
    """
    n = poly.degree
    if poly.is_zero:
        raise ValueError("the zero polynomial has no well-defined roots")
    if n == 0:
        return np.zeros(0, dtype=complex)
    c = np.asarray(poly.coeffs, dtype=complex)
    monic = c / c[-1]
    if n == 1:
        return np.array([-monic[0]], dtype=complex)
    radius = 1.0 + float(np.abs(monic[:-1]).max())
    angles = 2.0 * np.pi * np.arange(n) / n + 0.4
    x = radius * np.exp(1j * angles)
    for _ in range(DK_MAX_ITER):
        p = np.full(n, monic[-1], dtype=complex)
        for coef in monic[-2::-1]:
            p = p * x + coef
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        denom = diff.prod(axis=1)
        step = p / denom
        x = x - step
        if float(np.abs(step).max()) < DK_STEP_TOL:
            break
    return x


def cluster_points(points: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Greedy clustering of near-coincident points; returns (mean, count)."""
    remaining = list(points)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            for p in list(remaining):
                if any(abs(p - m) <= tol for m in members):
                    members.append(p)
                    remaining.remove(p)
                    changed = True
        mean = complex(np.mean(members))
        clusters.append((mean, len(members)))
    return clusters

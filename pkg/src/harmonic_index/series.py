"""Truncated Taylor series arithmetic and recentering of analytic functions.

A :class:`TruncatedSeries` holds coefficients a_0..a_N of an expansion about
a fixed center.  Arithmetic is exact through order N: sums and differences
add coefficients, products convolve and truncate, quotients solve the
triangular recurrence, and exp uses the standard derivative recurrence
g' = u' g.  Two series combine only when center and order agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PoleEvaluationError, SeriesArithmeticError, SeriesDivisionError
from .expressions import (
    Add,
    AnalyticFunction,
    Const,
    Div,
    Exp,
    IntPow,
    Mul,
    Node,
    Sub,
    Var,
)

# |a_k| <= COEFF_ZERO_RTOL * (1 + max_j |a_j|) counts as a vanishing
# coefficient when scanning for the first nonzero term.
COEFF_ZERO_RTOL = 1e-10

# Series division needs a denominator constant term above this (relative).
DIV_CONST_RTOL = 1e-12


def coefficient_threshold(coeffs: np.ndarray, rtol: float = COEFF_ZERO_RTOL) -> float:
    """Scale-aware cutoff below which a coefficient counts as zero."""
    scale = float(np.abs(np.asarray(coeffs)).max()) if len(coeffs) else 0.0
    return rtol * (1.0 + scale)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients a_0..a_N of an expansion in powers of (z - center)."""

    center: complex
    coeffs: np.ndarray
    exact_tail: bool = field(default=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        c.setflags(write=False)
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if self.center != other.center:
            raise SeriesArithmeticError(
                f"series centers differ: {self.center} vs {other.center}"
            )
        if self.order != other.order:
            raise SeriesArithmeticError(
                f"series orders differ: {self.order} vs {other.order}"
            )

    def _true_degree(self) -> int | None:
        """Index of the highest exactly-nonzero coefficient (None if all 0)."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else None

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(
            self.center, self.coeffs + other.coeffs, self.exact_tail and other.exact_tail
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        return TruncatedSeries(
            self.center, self.coeffs - other.coeffs, self.exact_tail and other.exact_tail
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        full = np.convolve(self.coeffs, other.coeffs)[: self.order + 1]
        exact = False
        if self.exact_tail and other.exact_tail:
            da, db = self._true_degree(), other._true_degree()
            exact = da is None or db is None or (da + db) <= self.order
        return TruncatedSeries(self.center, full, exact)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        b = other.coeffs
        if abs(b[0]) <= DIV_CONST_RTOL * (1.0 + float(np.abs(b).max())):
            raise SeriesDivisionError(
                f"denominator constant term {b[0]} is below tolerance"
            )
        a = self.coeffs
        q = np.zeros(self.order + 1, dtype=complex)
        for n in range(self.order + 1):
            acc = a[n]
            for k in range(n):
                acc -= q[k] * b[n - k]
            q[n] = acc / b[0]
        return TruncatedSeries(self.center, q, False)

    def power(self, exponent: int) -> "TruncatedSeries":
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        one = np.zeros(self.order + 1, dtype=complex)
        one[0] = 1.0
        result = TruncatedSeries(self.center, one, self.exact_tail)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exp(self) -> "TruncatedSeries":
        u = self.coeffs
        g = np.zeros(self.order + 1, dtype=complex)
        g[0] = np.exp(u[0])
        for k in range(1, self.order + 1):
            acc = 0j
            for j in range(1, k + 1):
                acc += j * u[j] * g[k - j]
            g[k] = acc / k
        return TruncatedSeries(self.center, g, False)

    # -- queries ---------------------------------------------------------------

    def __call__(self, z):
        """Evaluate the truncated sum at ``z`` (scalar or array)."""
        w = np.asarray(z, dtype=complex) - self.center
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        if np.ndim(z) == 0:
            return complex(acc)
        return acc

    def first_nonzero(self, start: int = 0, rtol: float = COEFF_ZERO_RTOL) -> int | None:
        """Smallest index >= start whose coefficient exceeds the zero cutoff."""
        cutoff = coefficient_threshold(self.coeffs, rtol)
        for k in range(start, self.order + 1):
            if abs(self.coeffs[k]) > cutoff:
                return k
        return None

    def with_coefficient(self, k: int, value: complex) -> "TruncatedSeries":
        c = np.array(self.coeffs)
        c[k] = value
        return TruncatedSeries(self.center, c, self.exact_tail)


def taylor_at(func: AnalyticFunction, center: complex, order: int = 16) -> TruncatedSeries:
    """Expand ``func`` about ``center`` through the given order.

    Runs truncated-series arithmetic over the expression tree; the variable
    node becomes center + (z - center).  Raises PoleEvaluationError when a
    division's denominator vanishes at the center.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    center = complex(center)
    n = order + 1

    def walk(node: Node) -> TruncatedSeries:
        if isinstance(node, Const):
            c = np.zeros(n, dtype=complex)
            c[0] = node.value
            return TruncatedSeries(center, c, True)
        if isinstance(node, Var):
            c = np.zeros(n, dtype=complex)
            c[0] = center
            if order >= 1:
                c[1] = 1.0
            return TruncatedSeries(center, c, order >= 1)
        if isinstance(node, Add):
            return walk(node.left) + walk(node.right)
        if isinstance(node, Sub):
            return walk(node.left) - walk(node.right)
        if isinstance(node, Mul):
            return walk(node.left) * walk(node.right)
        if isinstance(node, Div):
            num = walk(node.left)
            den = walk(node.right)
            try:
                return num / den
            except SeriesDivisionError as exc:
                raise PoleEvaluationError(
                    center, f"center {center} is a pole of a subexpression"
                ) from exc
        if isinstance(node, IntPow):
            return walk(node.base).power(node.exponent)
        if isinstance(node, Exp):
            return walk(node.arg).exp()
        raise TypeError(f"unknown node {node!r}")

    result = walk(func.root)
    # The tail flag is authoritative only for genuinely polynomial input.
    exact = func.is_polynomial and func.degree <= order
    if exact != result.exact_tail:
        result = TruncatedSeries(center, result.coeffs, exact)
    return result

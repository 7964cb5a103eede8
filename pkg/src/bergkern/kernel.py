"""Kernel series evaluation with certified truncation error.

For a radial weight the kernel is K(z,w) = sum_n alpha_n (z*conj(w))^n,
a power series in the single variable t = z*conj(w).  We work with the
one-variable function F(t) = sum_n alpha_n t^n throughout and expose

* a closed-form tail majorant from the comparability sandwich
  alpha_n <= C*(n+1)/pi,
* point evaluation with the truncation order chosen so the tail bound
  meets the requested tolerance,
* the polynomial (1-t)^2 * (partial sum), whose interior coefficients are
  the second differences of the alpha sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .weights import DiracAugmentedWeight, alphas_closed_form


class ToleranceError(RuntimeError):
    """Requested truncation tolerance unreachable within the term budget."""

    def __init__(self, message, achieved=None, n_used=None, value=None):
        super().__init__(message)
        self.achieved = achieved
        self.n_used = n_used
        self.value = value


def tail_bound(c: float, rho: float, n: int) -> float:
    """Majorant of |sum_{k>n} alpha_k t^k| on |t| <= rho.

    Uses alpha_k <= c*(k+1)/pi and the exact arithmetico-geometric tail
    sum_{k>n} (k+1) rho^k = rho^(n+1) * ((n+2) - (n+1) rho) / (1-rho)^2.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"tail bound needs rho in [0,1), got {rho}")
    if rho == 0.0:
        return 0.0
    return (c / math.pi) * rho ** (n + 1) * ((n + 2) - (n + 1) * rho) / (1.0 - rho) ** 2


def terms_for_tolerance(c: float, rho: float, tol: float, max_terms: int = 400_000) -> int:
    """Smallest n with tail_bound(c, rho, n) <= tol (monotone in n)."""
    if rho == 0.0:
        return 0
    if tail_bound(c, rho, max_terms) > tol:
        raise ToleranceError(
            f"tail bound {tail_bound(c, rho, max_terms):.3e} at {max_terms} terms exceeds tol {tol:.3e}",
            achieved=tail_bound(c, rho, max_terms), n_used=max_terms)
    lo, hi = 0, 1
    while tail_bound(c, rho, hi) > tol:
        lo, hi = hi, min(2 * hi, max_terms)
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(c, rho, mid) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return hi


class KernelSeries:
    """Coefficient cache for one weight, grown on demand.

    The instance is append-only: ``alphas(n)`` may extend the cached prefix
    but never mutates existing entries, so concurrent readers are safe.
    """

    def __init__(self, weight, initial_terms: int = 64, scale: float = 1.0):
        if scale <= 0:
            raise ValueError("scale factor must be positive")
        self.weight = weight
        self._scale = scale
        self._alphas = scale * alphas_closed_form(weight, initial_terms)
        # Effective constant for the tail majorant: sup alpha_n*pi/(n+1).
        # For function weights the comparability constant works; the
        # point-mass weight only lowers alpha_0, so c=1 is valid there.
        base_c = 1.0 if isinstance(weight, DiracAugmentedWeight) else weight.comparability_constant
        self.tail_constant = scale * base_c

    def alphas(self, n_max: int) -> np.ndarray:
        """Coefficients alpha_0..alpha_n_max (extending the cache if needed)."""
        if n_max >= len(self._alphas):
            self._alphas = self._scale * alphas_closed_form(
                self.weight, max(n_max, 2 * len(self._alphas)))
        return self._alphas[: n_max + 1]

    def alpha(self, n: int) -> float:
        return float(self.alphas(n)[n])

    def tail_bound(self, rho: float, n: int) -> float:
        return tail_bound(self.tail_constant, rho, n)

    def scaled(self, factor: float) -> "KernelSeries":
        """Series with all coefficients multiplied by factor > 0 (used by the
        scale-invariance checks; zero sets and verdicts must not move)."""
        return KernelSeries(self.weight, initial_terms=max(len(self._alphas) - 1, 2),
                            scale=self._scale * factor)


@dataclass(frozen=True)
class KernelValue:
    value: complex
    err_bound: float
    n_used: int


def eval_diagonal(series: KernelSeries, t: complex, tol: float = 1e-12,
                  max_terms: int = 400_000) -> KernelValue:
    """F(t) = sum alpha_n t^n with certified truncation error <= tol."""
    rho = abs(t)
    if rho >= 1.0:
        raise ValueError(f"|t| must be < 1, got {rho}")
    n = terms_for_tolerance(series.tail_constant, rho, tol, max_terms)
    coeffs = series.alphas(n)
    val = complex(np.polynomial.polynomial.polyval(complex(t), coeffs.astype(complex)))
    return KernelValue(value=val, err_bound=series.tail_bound(rho, n), n_used=n)


def kernel_eval(series: KernelSeries, z: complex, w: complex, tol: float = 1e-12,
                max_terms: int = 400_000) -> KernelValue:
    """Two-point kernel value K(z,w) = F(z*conj(w)) with certified error."""
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise ValueError("z and w must lie inside the unit disc")
    return eval_diagonal(series, z * np.conj(w), tol=tol, max_terms=max_terms)


def diagonal_poly(series: KernelSeries, n: int) -> np.ndarray:
    """Coefficients (ascending) of (1-t)^2 * sum_{k<=n} alpha_k t^k.

    Degree n+2.  Coefficient 0 is alpha_0, coefficient 1 is
    alpha_1 - 2*alpha_0, coefficients 2..n are the second differences
    alpha_k - 2*alpha_{k-1} + alpha_{k-2}, and the top two are the
    truncation boundary terms -2*alpha_n + alpha_{n-1} and alpha_n.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    a = series.alphas(n)
    out = np.empty(n + 3, dtype=float)
    out[0] = a[0]
    out[1] = a[1] - 2.0 * a[0]
    out[2:n + 1] = a[2:] - 2.0 * a[1:-1] + a[:-2]
    out[n + 1] = -2.0 * a[n] + a[n - 1]
    out[n + 2] = a[n]
    return out

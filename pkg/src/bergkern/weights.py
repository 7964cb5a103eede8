"""Radial weights on the unit disc and their moment sequences.

A radial weight lam(r) on [0,1) acts on the disc through lam(z) = lam(|z|).
Everything downstream is driven by the moments

    mu_n = 2*pi * int_0^1 r^(2n+1) lam(r) dr        (squared norm of z^n)

and the reciprocal coefficients alpha_n = 1/mu_n.  All values are kept in
"true" units: no hidden 2*pi rescaling anywhere.  For a weight comparable
to 1 with constant C (1/C <= lam <= C) the moments are sandwiched,

    pi/(C*(n+1)) <= mu_n <= C*pi/(n+1),

which is the source of every tail bound in the package.

Supported weight shapes:

* ``ConstantWeight(value)``
* ``StepWeight(segments)`` -- piecewise constant, breakpoints ending at 1
* ``SampledWeight(radii, values)`` -- piecewise linear through samples,
  constant extrapolation outside the sampled range
* ``DiracAugmentedWeight(mass)`` -- Lebesgue weight 1 plus a point mass at
  the origin; a singular measure, so it bypasses quadrature entirely and
  only the n=0 moment is modified.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi


class WeightError(ValueError):
    """Invalid weight definition."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the best value/error bound achieved so callers can decide
    whether the partial result is still usable.
    """

    def __init__(self, message, value=None, err=None, index=None):
        super().__init__(message)
        self.value = value
        self.err = err
        self.index = index


# ---------------------------------------------------------------------------
# weight variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantWeight:
    value: float = 1.0

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise WeightError(f"constant weight must be positive, got {self.value}")

    @property
    def comparability_constant(self) -> float:
        return max(self.value, 1.0 / self.value)

    @property
    def breakpoints(self):
        return (1.0,)

    def evaluate(self, r):
        return np.full_like(np.asarray(r, dtype=float), self.value)

    def label(self) -> str:
        return f"constant({self.value:g})"


@dataclass(frozen=True)
class StepWeight:
    """Piecewise-constant weight: value ``values[i]`` on (breakpoints[i-1], breakpoints[i]].

    The last breakpoint must be 1 (the value *at* r=1 is irrelevant, the
    closing breakpoint is just a representation convention).
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) != len(vals) or not bps:
            raise WeightError("breakpoints and values must be equal-length and non-empty")
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise WeightError("all segment values must be strictly positive")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])) or bps[0] <= 0:
            raise WeightError("breakpoints must be strictly increasing and positive")
        if bps[-1] != 1.0:
            raise WeightError("last breakpoint must be 1")

    @classmethod
    def from_plateau(cls, inner_value: float, split: float, outer_value: float = 1.0) -> "StepWeight":
        """Two-segment weight: ``inner_value`` on [0, split], ``outer_value`` beyond."""
        if not (0.0 < split < 1.0):
            raise WeightError(f"split must lie in (0,1), got {split}")
        return cls(breakpoints=(split, 1.0), values=(inner_value, outer_value))

    @property
    def comparability_constant(self) -> float:
        return max(max(self.values), 1.0 / min(self.values))

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(np.array(self.breakpoints), r, side="left")
        idx = np.clip(idx, 0, len(self.values) - 1)
        return np.array(self.values)[idx]

    def label(self) -> str:
        segs = ",".join(f"({b:g},{v:g})" for b, v in zip(self.breakpoints, self.values))
        return f"step[{segs}]"


@dataclass(frozen=True)
class SampledWeight:
    """Piecewise-linear interpolation through (radii[i], values[i]).

    Constant extrapolation below the first and above the last sample; the
    comparability constant comes from the sample extrema, which bound the
    interpolant as well.
    """

    radii: tuple
    values: tuple

    def __post_init__(self):
        rr = tuple(float(r) for r in self.radii)
        vv = tuple(float(v) for v in self.values)
        object.__setattr__(self, "radii", rr)
        object.__setattr__(self, "values", vv)
        if len(rr) != len(vv) or len(rr) < 2:
            raise WeightError("need at least two samples")
        if any(r2 <= r1 for r1, r2 in zip(rr, rr[1:])):
            raise WeightError("sample radii must be strictly increasing")
        if rr[0] < 0.0 or rr[-1] >= 1.0:
            raise WeightError("sample radii must lie in [0,1)")
        if any(not (v > 0 and math.isfinite(v)) for v in vv):
            raise WeightError("sample values must be strictly positive")

    @property
    def comparability_constant(self) -> float:
        return max(max(self.values), 1.0 / min(self.values))

    @property
    def breakpoints(self):
        return tuple(r for r in self.radii if r > 0.0) + (1.0,)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        return np.interp(r, self.radii, self.values)

    def label(self) -> str:
        return f"sampled[{len(self.radii)} pts, r<={self.radii[-1]:g}]"


@dataclass(frozen=True)
class DiracAugmentedWeight:
    """Lebesgue weight 1 plus ``mass`` times a point mass at the origin.

    Not a function, so there is no comparability constant and no
    quadrature path; the point mass only enters the n=0 monomial norm.
    """

    mass: float

    def __post_init__(self):
        if not (self.mass >= 0 and math.isfinite(self.mass)):
            raise WeightError(f"point mass must be >= 0, got {self.mass}")

    def label(self) -> str:
        return f"dirac(1+{self.mass:g}*delta0)"


RadialWeight = Union[ConstantWeight, StepWeight, SampledWeight, DiracAugmentedWeight]


def as_step(weight) -> StepWeight:
    """View a constant weight as a one-segment step (identity on steps)."""
    if isinstance(weight, StepWeight):
        return weight
    if isinstance(weight, ConstantWeight):
        return StepWeight(breakpoints=(1.0,), values=(weight.value,))
    raise WeightError(f"not a piecewise-constant weight: {weight!r}")


# ---------------------------------------------------------------------------
# moment table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentEntry:
    n: int
    mu: float
    alpha: float
    method: str          # "closed_form" | "quadrature"
    err: float           # relative error bound on the computed moment


@dataclass(frozen=True)
class MomentTable:
    weight: RadialWeight
    entries: tuple

    @property
    def alphas(self) -> np.ndarray:
        return np.array([e.alpha for e in self.entries], dtype=float)

    @property
    def mus(self) -> np.ndarray:
        return np.array([e.mu for e in self.entries], dtype=float)

    def sandwich_holds(self) -> bool:
        """(n+1)/(C*pi) <= alpha_n <= C*(n+1)/pi for every entry."""
        c = self.weight.comparability_constant
        for e in self.entries:
            lo = (e.n + 1) / (c * math.pi) * (1 - 10 * e.err)
            hi = c * (e.n + 1) / math.pi * (1 + 10 * e.err)
            if not (lo <= e.alpha <= hi):
                return False
        return True


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def moment_closed_form_step(weight, n: int):
    """Exact moment of a piecewise-constant weight.

    mu_n = (pi/(n+1)) * sum_i v_i * (r_i^(2n+2) - r_{i-1}^(2n+2)),  r_{-1} = 0.
    """
    if n < 0:
        raise ValueError(f"moment index must be >= 0, got {n}")
    w = as_step(weight)
    acc = 0.0
    prev = 0.0
    for b, v in zip(w.breakpoints, w.values):
        acc += v * (b ** (2 * n + 2) - prev ** (2 * n + 2))
        prev = b
    mu = math.pi / (n + 1) * acc
    return mu, 1.0 / mu


def step_alpha_pi_fraction(weight, n: int) -> Fraction:
    """alpha_n * pi as an exact rational, for steps with rational data.

    The step moments are rational multiples of pi, so signs of coefficient
    combinations (first/second differences) can be certified exactly even
    where float64 cancels to roundoff noise.
    """
    if n < 0:
        raise ValueError(f"moment index must be >= 0, got {n}")
    w = as_step(weight)
    acc = Fraction(0)
    prev = Fraction(0)
    for b, v in zip(w.breakpoints, w.values):
        fb = Fraction(b).limit_denominator(10**12)
        acc += Fraction(v).limit_denominator(10**12) * (fb ** (2 * n + 2) - prev ** (2 * n + 2))
        prev = fb
    return (n + 1) / acc  # alpha_n * pi = (n+1) / (acc)


def moment_closed_form_sampled(weight: SampledWeight, n: int):
    """Exact moment of a piecewise-linear weight.

    On each knot interval lam(r) = c0 + c1*r, so
    int r^(2n+1) lam dr = c0*(b^(2n+2)-a^(2n+2))/(2n+2) + c1*(b^(2n+3)-a^(2n+3))/(2n+3),
    plus constant pieces [0, r_0] and [r_last, 1].
    """
    if n < 0:
        raise ValueError(f"moment index must be >= 0, got {n}")
    rr = np.array(weight.radii)
    vv = np.array(weight.values)
    p, q = 2 * n + 2, 2 * n + 3
    total = vv[0] * rr[0] ** p / p                       # flat below first knot
    a, b = rr[:-1], rr[1:]
    c1 = (vv[1:] - vv[:-1]) / (b - a)
    c0 = vv[:-1] - c1 * a
    total += float(np.sum(c0 * (b ** p - a ** p) / p + c1 * (b ** q - a ** q) / q))
    total += vv[-1] * (1.0 - rr[-1] ** p) / p            # flat out to r=1
    mu = TWO_PI * total
    return mu, 1.0 / mu


def moment_closed_form_dirac(weight: DiracAugmentedWeight, n: int):
    """Moments of 1 + mass*delta_0: only the n=0 norm picks up the mass."""
    if n < 0:
        raise ValueError(f"moment index must be >= 0, got {n}")
    mu = math.pi / (n + 1) + (weight.mass if n == 0 else 0.0)
    return mu, 1.0 / mu


# ---------------------------------------------------------------------------
# adaptive panel quadrature
# ---------------------------------------------------------------------------

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _gauss_panel(f, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * float(np.dot(_GAUSS_WEIGHTS, f(mid + half * _GAUSS_NODES)))


def adaptive_segment_integral(f, edges, tol: float, max_panels: int = 4000):
    """Adaptive Gauss quadrature of f over [edges[0], edges[-1]].

    Interior edges are hard panel boundaries (so discontinuities are never
    straddled); the panel with the worst local error estimate is bisected
    until the total estimate meets the relative tolerance.  Raises
    QuadratureError with the best value/bound when the panel budget runs out.
    """
    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        coarse = _gauss_panel(f, a, b)
        m = 0.5 * (a + b)
        fine = _gauss_panel(f, a, m) + _gauss_panel(f, m, b)
        panels.append([abs(fine - coarse), a, b, fine])

    while True:
        total = sum(p[3] for p in panels)
        err = sum(p[0] for p in panels)
        scale = max(abs(total), 1e-300)
        if err <= tol * scale:
            return total, err / scale
        if len(panels) >= max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exhausted (relative error {err / scale:.2e} > {tol:.2e})",
                value=total, err=err / scale)
        worst = max(range(len(panels)), key=lambda i: panels[i][0])
        _, a, b, _ = panels.pop(worst)
        for aa, bb in ((a, 0.5 * (a + b)), (0.5 * (a + b), b)):
            coarse = _gauss_panel(f, aa, bb)
            m = 0.5 * (aa + bb)
            fine = _gauss_panel(f, aa, m) + _gauss_panel(f, m, bb)
            panels.append([abs(fine - coarse), aa, bb, fine])


def moment_quadrature(weight, n: int, tol: float = 1e-12, max_panels: int = 4000):
    """Numerical moment mu_n = 2*pi*int_0^1 r^(2n+1) lam(r) dr.

    Weight breakpoints / sample knots are hard panel boundaries; for large n
    the integrand concentrates near r=1 and the adaptive refinement follows
    it there.  Returns (mu, alpha, relative error bound).
    """
    if n < 0:
        raise ValueError(f"moment index must be >= 0, got {n}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(weight, DiracAugmentedWeight):
        raise WeightError("point-mass weights have no quadrature path; use the closed form")
    edges = sorted({0.0, 1.0, *(b for b in weight.breakpoints if 0.0 < b < 1.0)})

    def integrand(r):
        return r ** (2 * n + 1) * weight.evaluate(r)

    try:
        val, err = adaptive_segment_integral(integrand, edges, tol, max_panels)
    except QuadratureError as exc:
        raise QuadratureError(str(exc), value=(TWO_PI * exc.value if exc.value else None),
                              err=exc.err, index=n) from None
    mu = TWO_PI * val
    return mu, 1.0 / mu, err


# ---------------------------------------------------------------------------
# table construction
# ---------------------------------------------------------------------------

def moment_closed_form(weight, n: int):
    """Dispatch to the exact moment formula for the weight shape."""
    if isinstance(weight, (ConstantWeight, StepWeight)):
        return moment_closed_form_step(weight, n)
    if isinstance(weight, SampledWeight):
        return moment_closed_form_sampled(weight, n)
    if isinstance(weight, DiracAugmentedWeight):
        return moment_closed_form_dirac(weight, n)
    raise WeightError(f"unsupported weight: {weight!r}")


def moment_table(weight, n_max: int, tol: float = 1e-12, method: str = "auto") -> MomentTable:
    """Moments and coefficients for n = 0..n_max.

    method="auto" uses the exact closed form (every supported shape has
    one); method="quadrature" forces the numerical path, which exists for
    cross-checking and for weight shapes without a closed form.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    entries = []
    for n in range(n_max + 1):
        if method == "quadrature":
            mu, alpha, err = moment_quadrature(weight, n, tol=tol)
            entries.append(MomentEntry(n, mu, alpha, "quadrature", err))
        else:
            mu, alpha = moment_closed_form(weight, n)
            entries.append(MomentEntry(n, mu, alpha, "closed_form", 5e-16))
    return MomentTable(weight=weight, entries=tuple(entries))


def alphas_closed_form(weight, n_max: int) -> np.ndarray:
    """Vectorized alpha_0..alpha_n_max via the closed forms."""
    ns = np.arange(n_max + 1, dtype=float)
    if isinstance(weight, ConstantWeight):
        return (ns + 1.0) / (math.pi * weight.value)
    if isinstance(weight, DiracAugmentedWeight):
        al = (ns + 1.0) / math.pi
        al[0] = 1.0 / (math.pi + weight.mass)
        return al
    if isinstance(weight, StepWeight):
        bps = np.array(weight.breakpoints)[:, None]
        vals = np.array(weight.values)[:, None]
        prev = np.concatenate([[0.0], weight.breakpoints[:-1]])[:, None]
        powers = 2.0 * ns + 2.0
        mus = math.pi / (ns + 1.0) * np.sum(vals * (bps ** powers - prev ** powers), axis=0)
        return 1.0 / mus
    if isinstance(weight, SampledWeight):
        return np.array([moment_closed_form_sampled(weight, n)[1] for n in range(n_max + 1)])
    raise WeightError(f"unsupported weight: {weight!r}")


def outer_tail_parameters(weight):
    """(v_out, G, q): alpha_n = (n+1)/(pi*(v_out + g_n)) with |g_n| <= G*q^(n+1).

    Every supported shape is constant (= v_out) on an outer annulus
    [r_hat, 1), so (n+1)*mu_n/pi = v_out + g_n with g_n geometrically small
    (q = r_hat^2).  This powers the rigorous remainder bounds on second
    differences of the coefficients.
    """
    if isinstance(weight, ConstantWeight):
        return weight.value, 0.0, 0.0
    if isinstance(weight, StepWeight):
        if len(weight.values) == 1:
            return weight.values[0], 0.0, 0.0
        jumps = sum(abs(v1 - v2) for v1, v2 in zip(weight.values, weight.values[1:]))
        return weight.values[-1], jumps, weight.breakpoints[-2] ** 2
    if isinstance(weight, SampledWeight):
        v_out = weight.values[-1]
        return v_out, v_out + max(weight.values), weight.radii[-1] ** 2
    if isinstance(weight, DiracAugmentedWeight):
        # alpha_n exact (n+1)/pi for n>=1; only g_0 = mass/pi is nonzero.
        return 1.0, weight.mass / math.pi, 1e-300
    raise WeightError(f"unsupported weight: {weight!r}")


# ---------------------------------------------------------------------------
# JSON definition files
# ---------------------------------------------------------------------------

def weight_to_json(weight) -> dict:
    if isinstance(weight, ConstantWeight):
        return {"type": "constant", "value": weight.value}
    if isinstance(weight, StepWeight):
        return {"type": "step", "segments": [[b, v] for b, v in zip(weight.breakpoints, weight.values)]}
    if isinstance(weight, SampledWeight):
        return {"type": "sampled", "radii": list(weight.radii), "values": list(weight.values)}
    if isinstance(weight, DiracAugmentedWeight):
        return {"type": "dirac", "mass": weight.mass}
    raise WeightError(f"unsupported weight: {weight!r}")


def weight_from_json(obj: dict):
    try:
        kind = obj["type"]
    except (KeyError, TypeError):
        raise WeightError("weight JSON must be an object with a 'type' field") from None
    if kind == "constant":
        return ConstantWeight(value=float(obj.get("value", 1.0)))
    if kind == "step":
        segs = obj["segments"]
        return StepWeight(breakpoints=tuple(s[0] for s in segs), values=tuple(s[1] for s in segs))
    if kind == "sampled":
        return SampledWeight(radii=tuple(obj["radii"]), values=tuple(obj["values"]))
    if kind == "dirac":
        return DiracAugmentedWeight(mass=float(obj["mass"]))
    raise WeightError(f"unknown weight type {kind!r}")


def load_weight(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return weight_from_json(json.load(fh))

"""Discretized weighted projection onto holomorphic functions.

For a radial weight the projection of f onto span{1, z, ..., z^N} is

    Pf(z) = sum_{n<=N} alpha_n z^n <f, w^n>_lam,

so on a polar tensor grid (Gauss nodes in radius per weight segment,
uniform angles) the discrete projector inherits exact monomial
orthogonality: the angular trapezoid rule integrates trigonometric
polynomials of degree < M exactly, and M >= 4N+4 keeps every product
monomial in range.  Truncation error is governed by the kernel tail
bound, not by the grid.

Also here: L^p norms on the grid, a lower-bound probe of the projection's
L^p operator norm over a family of test functions, and the split-operator
witness ||Tf||_p^(2p) <= ||S1|f|||_p^p * ||S2|f|||_p^p for the factored
kernel (geometric part times difference part).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import KernelSeries
from .weights import DiracAugmentedWeight

_LEGGAUSS_CACHE: dict = {}


def _leggauss(n: int):
    if n not in _LEGGAUSS_CACHE:
        _LEGGAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _LEGGAUSS_CACHE[n]


@dataclass(frozen=True)
class DiscreteProjector:
    weight: object
    n_max: int
    radii: np.ndarray            # (R,)
    radial_weights: np.ndarray   # (R,) quadrature weights for int ... dr
    lam: np.ndarray              # (R,) weight values at the radii
    thetas: np.ndarray           # (M,)
    alphas: np.ndarray           # (n_max+1,)

    @property
    def grid(self) -> np.ndarray:
        """Complex grid points, shape (R, M)."""
        return self.radii[:, None] * np.exp(1j * self.thetas[None, :])

    @property
    def area_weights(self) -> np.ndarray:
        """dA weights on the grid: w_r * r * dtheta, shape (R, M)."""
        dtheta = 2.0 * math.pi / len(self.thetas)
        return (self.radial_weights * self.radii)[:, None] * np.full(len(self.thetas), dtheta)

    @property
    def weighted_area(self) -> np.ndarray:
        """lam dA weights on the grid, shape (R, M)."""
        return self.area_weights * self.lam[:, None]


def build_projector(weight, n_max: int, radial_per_segment: int = 200,
                    angular: int | None = None) -> DiscreteProjector:
    """Assemble the polar tensor grid and moment coefficients.

    Weight breakpoints are Gauss segment boundaries so every radial
    integrand is smooth per segment; the angular count defaults to 4N+8.
    """
    if isinstance(weight, DiracAugmentedWeight):
        raise ValueError("the discrete projector needs a function weight")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    edges = sorted({0.0, 1.0, *(b for b in weight.breakpoints if 0.0 < b < 1.0)})
    n_seg = len(edges) - 1
    per = radial_per_segment if n_seg <= 6 else max(8, (radial_per_segment * 6) // n_seg)
    nodes, wts = _leggauss(per)
    radii, radial_weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        radii.append(mid + half * nodes)
        radial_weights.append(half * wts)
    radii = np.concatenate(radii)
    radial_weights = np.concatenate(radial_weights)
    m = angular if angular is not None else 4 * n_max + 8
    if m < 4 * n_max + 4:
        raise ValueError(f"need at least {4 * n_max + 4} angular nodes for exact "
                         f"monomial orthogonality at degree {n_max}, got {m}")
    thetas = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    series = KernelSeries(weight)
    return DiscreteProjector(weight=weight, n_max=n_max, radii=radii,
                             radial_weights=radial_weights,
                             lam=weight.evaluate(radii), thetas=thetas,
                             alphas=series.alphas(n_max).copy())


def inner_product(proj: DiscreteProjector, f: np.ndarray, g: np.ndarray) -> complex:
    """Discrete <f, g>_lam = sum w * f * conj(g)."""
    return complex(np.sum(proj.weighted_area * f * np.conj(g)))


def monomial_inner(proj: DiscreteProjector, f: np.ndarray) -> np.ndarray:
    """<f, w^n>_lam for n = 0..n_max in one pass over the grid."""
    w = proj.weighted_area * f
    conj_grid = np.conj(proj.grid)
    out = np.empty(proj.n_max + 1, dtype=complex)
    power = np.ones_like(conj_grid)
    for n in range(proj.n_max + 1):
        out[n] = np.sum(w * power)
        power = power * conj_grid
    return out


@dataclass(frozen=True)
class ProjectedFunction:
    coeffs: np.ndarray    # c_n = alpha_n * <f, w^n>_lam
    values: np.ndarray    # resampled on the projector grid


def project(proj: DiscreteProjector, f: np.ndarray) -> ProjectedFunction:
    """Apply the truncated projection to grid samples of f."""
    f = np.asarray(f, dtype=complex)
    if f.shape != proj.grid.shape:
        raise ValueError(f"samples must live on the projector grid {proj.grid.shape}, "
                         f"got {f.shape}")
    coeffs = proj.alphas * monomial_inner(proj, f)
    values = np.zeros_like(f)
    power = np.ones_like(proj.grid)
    for c in coeffs:
        values = values + c * power
        power = power * proj.grid
    return ProjectedFunction(coeffs=coeffs, values=values)


def lp_norm(proj: DiscreteProjector, f: np.ndarray, p: float, weighted: bool = True) -> float:
    """(int |f|^p lam dA)^(1/p) on the grid (lam dropped when weighted=False)."""
    if not 1.0 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    w = proj.weighted_area if weighted else proj.area_weights
    return float(np.sum(w * np.abs(f) ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# test-function families
# ---------------------------------------------------------------------------

def function_from_spec(spec: dict):
    """Callable (complex points -> values) from a JSON-style description.

    Supported: {"type":"monomial","m":3,"conjugate":false},
    {"type":"radial_power","s":0.5}  for (1-|z|^2)^s,
    {"type":"bump","center":0.3,"width":0.1} for exp(-((|z|-c)/w)^2).
    """
    kind = spec.get("type")
    if kind == "monomial":
        m = int(spec.get("m", 0))
        conj = bool(spec.get("conjugate", False))
        if conj:
            return (lambda z: np.conj(z) ** m), f"conj(z)^{m}"
        return (lambda z: np.asarray(z, dtype=complex) ** m), f"z^{m}"
    if kind == "radial_power":
        s = float(spec["s"])
        return (lambda z: (1.0 - np.abs(z) ** 2) ** s), f"(1-|z|^2)^{s:g}"
    if kind == "bump":
        c, w = float(spec["center"]), float(spec["width"])
        return (lambda z: np.exp(-(((np.abs(z) - c) / w) ** 2))), f"bump({c:g},{w:g})"
    raise ValueError(f"unknown test-function spec {spec!r}")


def default_family(n_max: int, seed: int = 0):
    """(name, callable) pairs: monomials and conjugates up to n_max, radial
    powers, radial bumps, and seeded random trig-poly x radial-profile
    products."""
    specs = []
    for m in (0, 1, 2, 3, 5, 8, 13, 21, 34):
        if m > n_max:
            continue
        specs.append({"type": "monomial", "m": m})
        if m >= 1:
            specs.append({"type": "monomial", "m": m, "conjugate": True})
    specs.extend({"type": "radial_power", "s": s} for s in (0.25, 0.5, 1.0))
    specs.extend({"type": "bump", "center": c, "width": w} for c, w in ((0.3, 0.1), (0.7, 0.1)))
    family = []
    for spec in specs:
        fn, name = function_from_spec(spec)
        family.append((name, fn))
    rng = np.random.default_rng(seed)
    for i in range(3):
        k_max = 6
        c = rng.standard_normal(2 * k_max + 1) + 1j * rng.standard_normal(2 * k_max + 1)
        d = rng.standard_normal(4)

        def fn(z, c=c, d=d, k_max=k_max):
            r, th = np.abs(z), np.angle(z)
            trig = sum(ck * np.exp(1j * (k - k_max) * th) for k, ck in enumerate(c))
            radial = sum(dj * r ** j for j, dj in enumerate(d))
            return trig * radial

        family.append((f"random_{i}", fn))
    return family


@dataclass(frozen=True)
class ProbeResult:
    weight_label: str
    p: float
    n_max: int
    max_ratio: float
    rows: tuple              # (function name, ratio) pairs; skipped functions carry None


def lp_probe(weight, p_values, n_max: int = 40, radial_per_segment: int = 200,
             angular: int | None = None, family=None, seed: int = 0):
    """Lower-bound probe of ||P||_{L^p(lam)}: max over the family of
    ||Pf||_p / ||f||_p.  A witness of boundedness only -- no claim of
    computing the true operator norm."""
    proj = build_projector(weight, n_max, radial_per_segment, angular)
    fam = family if family is not None else default_family(n_max, seed)
    grid = proj.grid
    projected = []
    for name, fn in fam:
        samples = np.asarray(fn(grid), dtype=complex)
        if samples.shape != grid.shape:
            samples = np.broadcast_to(samples, grid.shape).astype(complex)
        projected.append((name, samples, project(proj, samples).values))
    results = []
    label = weight.label()
    for p in p_values:
        rows = []
        best = 0.0
        for name, samples, pvals in projected:
            denom = lp_norm(proj, samples, p)
            if denom == 0.0:
                rows.append((name, None))
                continue
            ratio = lp_norm(proj, pvals, p) / denom
            rows.append((name, ratio))
            best = max(best, ratio)
        results.append(ProbeResult(weight_label=label, p=float(p), n_max=n_max,
                                   max_ratio=best, rows=tuple(rows)))
    return results


# ---------------------------------------------------------------------------
# split-operator witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitWitness:
    lhs: float     # ||Tf||_p^(2p)
    rhs: float     # ||S1|f|||_p^p * ||S2|f|||_p^p
    holds: bool


def cs_split_witness(weight, f, p: float, n_trunc: int = 12,
                     radial: int = 32, angular: int = 48) -> SplitWitness:
    """Numerical check of ||Tf||_p^(2p) <= ||S1|f|||_p^p ||S2|f|||_p^p.

    The kernel factors as (sum (z*conj(w))^n) * (sum b_n (z*conj(w))^n)
    with b the first differences of the weight's coefficients; S1, S2 are
    the squared-modulus operators of the factors applied to |f|, and the
    inequality is two Cauchy-Schwarz steps, valid on any positive grid.
    All integrals here are unweighted (plain dA) and truncated at n_trunc.
    """
    if not 1.0 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    nodes, wts = _leggauss(radial)
    r = 0.5 * (nodes + 1.0)
    wr = 0.5 * wts
    thetas = np.linspace(0.0, 2.0 * math.pi, angular, endpoint=False)
    pts = (r[:, None] * np.exp(1j * thetas[None, :])).ravel()
    area = ((wr * r)[:, None] * np.full(angular, 2.0 * math.pi / angular)).ravel()

    alphas = KernelSeries(weight).alphas(n_trunc)
    b = np.diff(alphas, prepend=0.0)

    fv = np.asarray(f(pts), dtype=complex)
    if fv.shape != pts.shape:
        fv = np.broadcast_to(fv, pts.shape).astype(complex)
    tf = np.empty_like(fv)
    s1 = np.empty(len(pts))
    s2 = np.empty(len(pts))
    chunk = 512
    conj_pts = np.conj(pts)
    for lo in range(0, len(pts), chunk):
        z = pts[lo:lo + chunk, None]
        t = z * conj_pts[None, :]
        k1 = (1.0 - t ** (n_trunc + 1)) / (1.0 - t)
        k2 = np.zeros_like(t)
        for c in b[::-1]:
            k2 = k2 * t + c
        tf[lo:lo + chunk] = (k1 * k2) @ (area * fv)
        s1[lo:lo + chunk] = np.real(np.abs(k1) ** 2 @ (area * np.abs(fv)))
        s2[lo:lo + chunk] = np.real(np.abs(k2) ** 2 @ (area * np.abs(fv)))

    lhs = float(np.sum(area * np.abs(tf) ** p) ** 2)
    rhs = float(np.sum(area * s1 ** p) * np.sum(area * s2 ** p))
    return SplitWitness(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs * (1.0 + 1e-12)))

import math

import numpy as np
import pytest

from bergkern import (ConstantWeight, build_projector, cs_split_witness, default_family,
                      lp_norm, lp_probe, project)
from bergkern.projector import function_from_spec, inner_product
from bergkern.weights import DiracAugmentedWeight

PI = math.pi


@pytest.fixture(scope="module")
def proj_const(const1):
    return build_projector(const1, 40)


@pytest.fixture(scope="module")
def proj_step(step18):
    return build_projector(step18, 40)


# --------------------------------------------------------------------------
# grid algebra
# --------------------------------------------------------------------------

def test_discrete_monomial_orthogonality(proj_step):
    grid = proj_step.grid
    mu_min = 1.0 / proj_step.alphas[-1]
    for m, n in ((0, 1), (2, 5), (7, 40)):
        ip = inner_product(proj_step, grid ** m, grid ** n)
        assert abs(ip) <= 1e-13 * mu_min


def test_discrete_monomial_norms_match_moments(proj_step):
    grid = proj_step.grid
    for n in (0, 3, 17, 40):
        ip = inner_product(proj_step, grid ** n, grid ** n)
        assert ip.real == pytest.approx(1.0 / proj_step.alphas[n], rel=1e-13)


def test_projection_fixes_monomials(proj_const, proj_step):
    for proj in (proj_const, proj_step):
        f = proj.grid ** 3
        got = project(proj, f)
        assert np.max(np.abs(got.values - f)) <= 1e-10
        assert got.coeffs[3] == pytest.approx(1.0, rel=1e-12)


def test_projection_reproduces_polynomials(proj_step):
    grid = proj_step.grid
    poly = 0.3 - 1.1 * grid + grid ** 12 / 3.0 + (0.2 + 0.7j) * grid ** 40
    got = project(proj_step, poly)
    assert np.max(np.abs(got.values - poly)) <= 1e-9


def test_projection_annihilates_antiholomorphic(proj_const, proj_step):
    for proj in (proj_const, proj_step):
        for m in (1, 2, 5):
            got = project(proj, np.conj(proj.grid) ** m)
            assert np.max(np.abs(got.values)) <= 1e-10


def test_projection_of_radial_profile(proj_const):
    # (1 - |w|^2) has <f, 1> = pi/2, so the projection is the constant 1/2
    f = 1.0 - np.abs(proj_const.grid) ** 2
    got = project(proj_const, f)
    assert np.max(np.abs(got.values - 0.5)) <= 1e-12
    assert got.coeffs[0] == pytest.approx(0.5, rel=1e-13)
    assert np.max(np.abs(got.coeffs[1:])) <= 1e-14


def test_projection_idempotent(proj_step):
    rng = np.random.default_rng(5)
    f = rng.standard_normal(proj_step.grid.shape) + 1j * rng.standard_normal(proj_step.grid.shape)
    once = project(proj_step, f).values
    twice = project(proj_step, once).values
    assert np.max(np.abs(twice - once)) <= 1e-9 * max(1.0, float(np.max(np.abs(once))))


def test_projection_self_adjoint(proj_step):
    rng = np.random.default_rng(6)
    shape = proj_step.grid.shape
    f = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    lhs = inner_product(proj_step, project(proj_step, f).values, g)
    rhs = inner_product(proj_step, f, project(proj_step, g).values)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_projection_rejects_wrong_grid(proj_step):
    with pytest.raises(ValueError):
        project(proj_step, np.ones((3, 3)))


def test_projector_guards():
    with pytest.raises(ValueError):
        build_projector(ConstantWeight(1.0), 10, angular=20)   # needs >= 44
    with pytest.raises(ValueError):
        build_projector(DiracAugmentedWeight(1.0), 10)


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------

def test_lp_norm_constant_function(proj_const):
    one = np.ones_like(proj_const.grid)
    assert lp_norm(proj_const, one, 2.0) == pytest.approx(math.sqrt(PI), rel=1e-13)


def test_lp_norm_identity_function(proj_const, proj_step):
    assert lp_norm(proj_const, proj_const.grid, 2.0) == pytest.approx(
        math.sqrt(PI / 2.0), rel=1e-13)
    assert lp_norm(proj_step, proj_step.grid, 2.0) == pytest.approx(
        math.sqrt(273.0 * PI / 512.0), rel=1e-13)


def test_lp_norm_rejects_bad_exponent(proj_const):
    with pytest.raises(ValueError):
        lp_norm(proj_const, proj_const.grid, 1.0)


# --------------------------------------------------------------------------
# probe
# --------------------------------------------------------------------------

def test_probe_monomial_is_fixed_point(const1):
    res = lp_probe(const1, [2.0], n_max=10, radial_per_segment=60,
                   family=[("z^2", lambda z: z ** 2)])
    assert res[0].max_ratio == pytest.approx(1.0, abs=1e-10)


def test_probe_antiholomorphic_ratio_zero(const1):
    res = lp_probe(const1, [2.0], n_max=10, radial_per_segment=60,
                   family=[("conj(z)^3", lambda z: np.conj(z) ** 3)])
    assert res[0].max_ratio <= 1e-12


def test_probe_default_family_reports_rows(step18):
    res = lp_probe(step18, [2.0, 3.0], n_max=10, radial_per_segment=60, seed=0)
    assert len(res) == 2
    for r in res:
        assert r.max_ratio >= 1.0 - 1e-10      # monomials are in the family
        assert len(r.rows) == len(default_family(10, seed=0))


def test_probe_skips_degenerate_function(const1):
    res = lp_probe(const1, [2.0], n_max=8, radial_per_segment=50,
                   family=[("zero", lambda z: 0.0 * z), ("one", lambda z: 0 * z + 1.0)])
    rows = dict(res[0].rows)
    assert rows["zero"] is None
    assert rows["one"] == pytest.approx(1.0, abs=1e-10)


# --------------------------------------------------------------------------
# split witness
# --------------------------------------------------------------------------

def test_cs_split_constant_function(step18):
    fn, _ = function_from_spec({"type": "monomial", "m": 0})
    wit = cs_split_witness(step18, fn, 2.0)
    assert wit.holds and wit.lhs <= wit.rhs


def test_cs_split_identity_function(const1):
    fn, _ = function_from_spec({"type": "monomial", "m": 1})
    wit = cs_split_witness(const1, fn, 2.0)
    assert wit.holds and wit.lhs <= wit.rhs


def test_cs_split_zero_function(step18):
    wit = cs_split_witness(step18, lambda z: 0.0 * z, 3.0)
    assert wit.lhs == 0.0 and wit.rhs == 0.0 and wit.holds


def test_cs_split_rejects_bad_exponent(step18):
    with pytest.raises(ValueError):
        cs_split_witness(step18, lambda z: z, 1.0)


# --------------------------------------------------------------------------
# function specs
# --------------------------------------------------------------------------

def test_function_from_spec_variants():
    z = np.array([0.5 + 0.5j])
    fn, name = function_from_spec({"type": "monomial", "m": 2, "conjugate": True})
    assert fn(z)[0] == pytest.approx(np.conj(z[0]) ** 2)
    assert "conj" in name
    fn, _ = function_from_spec({"type": "radial_power", "s": 0.5})
    assert fn(z)[0] == pytest.approx(math.sqrt(1 - 0.5))
    fn, _ = function_from_spec({"type": "bump", "center": 0.5, "width": 0.1})
    assert fn(np.array([0.5]))[0] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        function_from_spec({"type": "mystery"})

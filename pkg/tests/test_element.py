from fractions import Fraction
import random

import numpy as np
import pytest

from pyramidfe.dofs import apply_dof, build_dof_set, dof_values
from pyramidfe.element import (
    build_element,
    certify_unisolvence,
    mass_matrix,
    nodal_basis,
    tabulate,
    tabulate_physical,
    vandermonde,
)
from pyramidfe.geometry import affine_pyramid
from pyramidfe.ratfun import ETA, ONE, ONE_MINUS_ZETA, XI, ZETA, RatFun, evaluate, reference_polynomial
from pyramidfe.spaces import Family, SpaceSpec

F = Fraction
YM, Y = Family.YMINUS, Family.Y
VERTS = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1)]


def test_vandermonde_order_one():
    v = vandermonde(SpaceSpec(YM, 1))
    # basis 1, 1-zeta, eta, xi, xi*eta/(1-zeta); rows are the five vertices
    assert v.rows == [
        [1, 1, 0, 0, 0],
        [1, 1, 0, 1, 0],
        [1, 1, 1, 1, 1],
        [1, 1, 1, 0, 0],
        [1, 0, 0, 0, 0],
    ]
    assert v.rows == vandermonde(SpaceSpec(Y, 1)).rows


def test_vandermonde_sizes():
    assert vandermonde(SpaceSpec(YM, 2)).shape == (14, 14)
    assert vandermonde(SpaceSpec(Y, 2)).shape == (13, 13)


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("family", [YM, Y])
def test_unisolvence_small(family, r):
    cert = certify_unisolvence(SpaceSpec(family, r))
    assert cert.invertible


def test_duplicated_row_is_singular():
    spec = SpaceSpec(YM, 2)
    dofs = build_dof_set(spec)
    dofs[3] = dofs[2]
    cert = certify_unisolvence(spec, dofs)
    assert cert.determinant == 0 and not cert.invertible


def test_nodal_order_one():
    el = nodal_basis(SpaceSpec(Y, 1))
    nodal = el.nodal_functions
    assert nodal[4] == ZETA
    assert nodal[0] == ONE_MINUS_ZETA - XI - ETA + RatFun.monomial(1, 1, 1)
    assert sum(nodal, RatFun()) == ONE
    # (1-xi-zeta)(1-eta-zeta)/(1-zeta) at an interior point
    p = (F(1, 5), F(1, 7), F(1, 3))
    assert evaluate(nodal[0], p) == (1 - p[0] - p[2]) * (1 - p[1] - p[2]) / (1 - p[2])


def test_interpolation_examples():
    xe = XI * ETA
    assert nodal_basis(SpaceSpec(YM, 2)).interpolate(xe) == xe
    z3 = ZETA ** 3
    assert nodal_basis(SpaceSpec(Y, 3)).interpolate(z3) == z3
    el = nodal_basis(SpaceSpec(Y, 2))
    target = RatFun.monomial(2, 2, 2)
    out = el.interpolate(target)
    assert out != target
    assert dof_values(el.dofs, out) == dof_values(el.dofs, target)


@pytest.mark.parametrize("family", [YM, Y])
def test_interpolation_is_idempotent(family):
    el = nodal_basis(SpaceSpec(family, 3))
    target = reference_polynomial(2, 1, 2) + RatFun.monomial(3, 3, 3) + ZETA ** 4
    once = el.interpolate(target)
    assert el.interpolate(once) == once


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("family", [YM, Y])
def test_duality(family, r):
    el = nodal_basis(SpaceSpec(family, r))
    assert (el.vandermonde @ el.dual).is_identity()
    for j, f in enumerate(el.nodal_functions):
        assert dof_values(el.dofs, f) == [F(int(i == j)) for i in range(len(el))]


@pytest.mark.parametrize("family", [YM, Y])
def test_index_basis_independence(family):
    spec = SpaceSpec(family, 4)
    plain = nodal_basis(spec)
    mixed = build_element(spec, build_dof_set(spec, rng=random.Random(5)))
    assert mixed.vandermonde.rows != plain.vandermonde.rows
    rng = random.Random(17)
    for _ in range(10):
        target = RatFun()
        for _ in range(4):
            a, b, c = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
            target = target + reference_polynomial(a, b, c) * F(rng.randint(-5, 5), rng.randint(1, 4))
        assert mixed.interpolate(target) == plain.interpolate(target)


@pytest.mark.parametrize("family", [YM, Y])
def test_tabulate_vertices_identity(family):
    tab = tabulate(SpaceSpec(family, 1), VERTS)
    assert np.array_equal(tab.values, np.eye(5))


def _random_interior(rng, n):
    # uniform in volume, by rejection from the unit cube
    pts = []
    while len(pts) < n:
        x, y, z = rng.random(), rng.random(), rng.random()
        if x < 1 - z and y < 1 - z:
            pts.append((x, y, z))
    return pts


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("family", [YM, Y])
def test_gradients_match_finite_differences(family, r):
    spec = SpaceSpec(family, r)
    pts = _random_interior(random.Random(r), 20)
    h = 1e-5
    tab = tabulate(spec, pts)
    for d in range(3):
        plus = [tuple(c + h * (i == d) for i, c in enumerate(p)) for p in pts]
        minus = [tuple(c - h * (i == d) for i, c in enumerate(p)) for p in pts]
        fd = (tabulate(spec, plus).values - tabulate(spec, minus).values) / (2 * h)
        assert np.max(np.abs(fd - tab.gradients[:, :, d])) < 1e-7


@pytest.mark.parametrize("r", range(1, 6))
@pytest.mark.parametrize("family", [YM, Y])
def test_apex_values_finite(family, r):
    tab = tabulate(SpaceSpec(family, r), [(0, 0, 1)])
    assert np.all(np.isfinite(tab.values))
    # the apex vertex DOF is the first-row delta at r >= 1
    assert tab.values[0, 4] == 1.0


def test_apex_gradient_nan_where_no_limit():
    tab = tabulate(SpaceSpec(YM, 1), [(0, 0, 1)])
    # xi*eta/(1-zeta) has direction-dependent first derivatives at the apex
    assert np.isnan(tab.gradients[0]).any()
    assert np.all(np.isfinite(tab.gradients[0, 4]))


def test_tabulate_rejects_outside_point():
    from pyramidfe.errors import OutsideReferenceError
    with pytest.raises(OutsideReferenceError):
        tabulate(SpaceSpec(Y, 1), [(0.9, 0.9, 0.5)])


def test_tabulate_physical_chain_rule():
    phys = [(1, 0, 0), (3, 0, 0), (3, 1, 0), (1, 1, 0), (2, 1, 4)]
    A = affine_pyramid(phys)
    spec = SpaceSpec(Y, 2)
    ref_pts = [(F(1, 5), F(1, 4), F(1, 3)), (F(1, 10), F(1, 2), F(1, 4))]
    x_pts = [A.to_physical(p) for p in ref_pts]
    ref = tabulate(spec, ref_pts)
    phys_tab = tabulate_physical(spec, A, x_pts)
    assert np.allclose(phys_tab.values, ref.values, atol=1e-15)
    # J^T grad_x = grad_ref with J the reference-to-physical Jacobian
    J = np.array([[float(v) for v in row] for row in A.matrix])
    back = np.einsum("ji,pkj->pki", J, phys_tab.gradients)
    assert np.allclose(back, ref.gradients, atol=1e-12)


def test_mass_matrix_entries():
    m = mass_matrix(SpaceSpec(YM, 1))
    assert m.rows[0][0] == F(1, 3)
    assert m.rows[0][1] == F(1, 4)


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("family", [YM, Y])
def test_mass_matrix_spd(family, r):
    m = mass_matrix(SpaceSpec(family, r))
    assert m.is_symmetric()
    assert m.is_positive_definite()

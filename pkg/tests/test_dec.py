import numpy as np
import pytest

from gaugestack.errors import ContractViolation
from gaugestack.ym.dec import (CubicalComplex, codifferential, d, d_A, delta_A, hodge, inner,
                               perm_sign, wedge)

from oracles import d0_dense, d1_dense

CASES = [((6, 5), (0.5, 1.0)), ((4, 5, 3), (0.3, 1.0, 0.7)), ((8, 8), (1.0, 1.0))]


def _cx(shape, spacing, lorentzian):
    return CubicalComplex(shape, periodic=(True,) * len(shape), spacing=spacing, lorentzian=lorentzian)


@pytest.mark.parametrize("shape", [(3, 4), (5, 5)])
def test_coboundaries_match_cellwise_oracle(shape):
    cx = CubicalComplex(shape, periodic=(True, True))
    assert np.array_equal(cx.D(0).toarray(), d0_dense(cx))
    assert np.array_equal(cx.D(1).toarray(), d1_dense(cx))


@pytest.mark.parametrize("shape,spacing", CASES)
def test_d_squared_vanishes(shape, spacing):
    cx = _cx(shape, spacing, True)
    for p in range(cx.m - 1):
        assert abs(cx.D(p + 1) @ cx.D(p)).max() == 0
        assert abs(cx.D_dual(p + 1) @ cx.D_dual(p)).max() == 0


@pytest.mark.parametrize("shape,spacing", CASES)
@pytest.mark.parametrize("lorentzian", [True, False])
def test_codifferential_is_adjoint_of_d(shape, spacing, lorentzian):
    cx = _cx(shape, spacing, lorentzian)
    rng = np.random.default_rng(7)
    for p in range(1, cx.m + 1):
        for _ in range(20):
            a = rng.standard_normal(cx.n_cells(p - 1))
            b = rng.standard_normal(cx.n_cells(p))
            lhs = inner(cx, d(cx, a, p - 1), b, p)
            rhs = inner(cx, a, codifferential(cx, b, p), p - 1)
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@pytest.mark.parametrize("shape,spacing", CASES)
@pytest.mark.parametrize("lorentzian", [True, False])
def test_double_star_sign(shape, spacing, lorentzian):
    cx = _cx(shape, spacing, lorentzian)
    s = 1 if lorentzian else 0
    rng = np.random.default_rng(3)
    for p in range(cx.m + 1):
        w = rng.standard_normal(cx.n_cells(p))
        back = hodge(cx, hodge(cx, w, p), p, dual=True)
        assert np.allclose(back, (-1) ** (p * (cx.m - p) + s) * w, rtol=0, atol=1e-13)


def test_perm_sign():
    assert perm_sign((0, 1, 2)) == 1
    assert perm_sign((1, 0, 2)) == -1
    assert perm_sign((2, 0, 1)) == 1


def test_d_of_top_degree_is_rejected():
    cx = _cx((3, 3), (1.0, 1.0), False)
    with pytest.raises(ContractViolation):
        d(cx, np.zeros(cx.n_cells(2)), 2)
    with pytest.raises(ContractViolation):
        codifferential(cx, np.zeros(cx.n_cells(0)), 0)


def test_abelian_covariant_derivatives_reduce_to_d_and_delta():
    cx = _cx((4, 4), (1.0, 0.5), True)
    rng = np.random.default_rng(0)
    a = rng.standard_normal(cx.n_cells(1))
    assert np.array_equal(d_A(cx, None, a, 1), d(cx, a, 1))
    assert np.array_equal(delta_A(cx, None, a, 1), codifferential(cx, a, 1))


def test_matrix_covariant_derivative_under_constant_gauge():
    cx = _cx((4, 4), (1.0, 1.0), True)
    rng = np.random.default_rng(5)
    A = rng.standard_normal((cx.n_cells(1), 2, 2))
    w = rng.standard_normal((cx.n_cells(1), 2, 2))
    g = np.linalg.qr(rng.standard_normal((2, 2)))[0]
    gi = g.T
    conj = lambda x: np.einsum("ij,kjl,lm->kim", gi, x, g)
    lhs = d_A(cx, conj(A), conj(w), 1)
    rhs = conj(d_A(cx, A, w, 1))
    assert np.allclose(lhs, rhs, atol=1e-12)
    lhs = delta_A(cx, conj(A), conj(w), 1)
    rhs = conj(delta_A(cx, A, w, 1))
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_wedge_of_functions_is_pointwise_product():
    cx = _cx((3, 3), (1.0, 1.0), False)
    rng = np.random.default_rng(2)
    f = rng.standard_normal((cx.n_cells(0), 1, 1))
    g = rng.standard_normal((cx.n_cells(0), 1, 1))
    assert np.allclose(wedge(cx, f, 0, g, 0), f * g)

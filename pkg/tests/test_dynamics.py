import numpy as np
import pytest

from gaugestack.errors import ContractViolation
from gaugestack.presheaf import interval_site
from gaugestack.ym.dynamics import (Datum, LorentzGrid, cauchy_solve, cauchy_wellposed_check,
                                    constraint_residual, data_extract, extension_kernel_dimension,
                                    gauge_act, gauge_fix_solve, lorenz_residual_max, random_datum,
                                    slice_gauge_match, ym_residual_max)

from oracles import temporal_gauge_solution


def _grid(nt=16, nx=12, cfl=0.5, t0=0):
    dx = 1.0 / nx
    return LorentzGrid(nt, nx, cfl * dx, dx, t0)


def test_temporal_gauge_solution_matches_closed_form():
    g = _grid()
    rng = np.random.default_rng(11)
    d = random_datum(g, rng)
    A = cauchy_solve(g, d)
    want = temporal_gauge_solution(g.nt, d.A, d.E, g.dt)
    assert np.max(np.abs(A[g.x_edges] - want)) < 1e-12
    assert np.all(A[g.t_edges] == 0)


def test_slice_in_the_middle_evolves_both_ways():
    g = _grid(t0=5)
    d = random_datum(g, np.random.default_rng(4))
    A = cauchy_solve(g, d)
    assert ym_residual_max(g, A) < 1e-10
    assert slice_gauge_match(g, data_extract(g, A), d) is not None
    k = np.arange(g.nt) - g.t0
    assert np.allclose(A[g.x_edges], d.A[None, :] + (k * g.dt)[:, None] * d.E[None, :], atol=1e-12)


def test_zero_datum_gives_zero_field():
    g = _grid()
    A = cauchy_solve(g, Datum(np.zeros(g.nx), np.zeros(g.nx)))
    assert not np.any(A)


def test_cfl_limit_is_enforced():
    g = _grid(cfl=1.5)
    with pytest.raises(ContractViolation):
        cauchy_solve(g, Datum(np.zeros(g.nx), np.zeros(g.nx)))


def test_constraint_violation_is_rejected():
    g = _grid()
    E = np.zeros(g.nx)
    E[3] = 1.0
    assert np.max(np.abs(constraint_residual(g, Datum(np.zeros(g.nx), E)))) > 0
    with pytest.raises(ContractViolation):
        cauchy_solve(g, Datum(np.zeros(g.nx), E))


def test_grid_validation():
    with pytest.raises(ContractViolation):
        LorentzGrid(2, 8, 0.1, 0.1)
    with pytest.raises(ContractViolation):
        LorentzGrid(8, 8, -0.1, 0.1)
    with pytest.raises(ContractViolation):
        LorentzGrid(8, 8, 0.1, 0.1, t0=7)
    with pytest.raises(ContractViolation):
        Datum(np.zeros(3), np.zeros(4))


def test_gauge_transformed_solution_has_gauge_equivalent_datum():
    g = _grid()
    rng = np.random.default_rng(8)
    d = random_datum(g, rng)
    A = cauchy_solve(g, d)
    B = gauge_act(g, A, rng.standard_normal(g.cx.n_cells(0)))
    assert ym_residual_max(g, B) < 1e-10
    assert slice_gauge_match(g, data_extract(g, B), d) is not None


def test_different_electric_fields_are_not_gauge_equivalent():
    g = _grid()
    d = random_datum(g, np.random.default_rng(9))
    d2 = Datum(d.A, d.E + g.dx)
    assert slice_gauge_match(g, d, d2) is None


def test_lorenz_gauge_fix():
    g = _grid()
    rng = np.random.default_rng(13)
    A = cauchy_solve(g, random_datum(g, rng))
    A = gauge_act(g, A, rng.standard_normal(g.cx.n_cells(0)))
    B = gauge_act(g, A, gauge_fix_solve(g, A))
    assert lorenz_residual_max(g, B) < 1e-8
    assert ym_residual_max(g, B) < 1e-10


def test_extension_kernel_is_trivial():
    assert extension_kernel_dimension(_grid()) == 0


def _family(g, rng, n):
    return [random_datum(g, rng) for _ in range(n)]


def test_wellposed_for_smooth_family():
    g = _grid()
    site = interval_site()
    rng = np.random.default_rng(1)
    h = rng.standard_normal(g.nx)
    r = cauchy_wellposed_check(g, site, "I", _family(g, rng, 1), {v: h for v in "abc"})
    assert r.ok
    assert {row[0] for row in r.rows} == {"existence", "uniqueness", "extension"}


def test_wellposed_fails_for_nonsmooth_gauge_family():
    g = _grid()
    site = interval_site()
    rng = np.random.default_rng(2)
    h = rng.standard_normal(g.nx)
    r = cauchy_wellposed_check(g, site, "I", _family(g, rng, 1), {"a": h, "b": h + 1.0, "c": h})
    assert not r.ok
    assert any(row[0] == "extension" and not row[2] for row in r.rows)


def test_wellposed_component_count_must_match():
    g = _grid()
    with pytest.raises(ContractViolation):
        cauchy_wellposed_check(g, interval_site(), "I", _family(g, np.random.default_rng(0), 2))

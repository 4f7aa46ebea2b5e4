"""Abelian Yang-Mills on 1+1 lattices: residuals, Cauchy data, leapfrog evolution, Lorenz gauge.

Grid: nt time levels (open) × nx sites (periodic in space), spacings (dt, dx). A field
is a real 1-cochain A on the grid's edges; the Cauchy slice is time level t0. The
datum of a field is (A^Σ, E) with A^Σ the pullback to the slice and E = ι*(n ⌟ F),
n = ∂_t, so a plaquette value F = f dt dx contributes E = f dx on the slice edge
below it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..errors import ContractViolation
from .dec import CubicalComplex, codifferential_matrix

DEFAULT_RESIDUAL_TOL = 1e-10
DEFAULT_GAUGE_TOL = 1e-8


class LorentzGrid:
    """1+1 lattice, open in time and periodic in space, signature (−, +)."""

    def __init__(self, nt: int, nx: int, dt: float, dx: float, t0: int = 0):
        if dt <= 0 or dx <= 0:
            raise ContractViolation("Δt and Δx must be positive")
        if nt < 3 or nx < 2:
            raise ContractViolation("grid needs nt ≥ 3 and nx ≥ 2")
        if not 0 <= t0 < nt - 1:
            raise ContractViolation(f"Cauchy slice t0 = {t0} outside 0..{nt - 2}")
        self.nt, self.nx, self.dt, self.dx, self.t0 = nt, nx, float(dt), float(dx), t0
        self.cx = CubicalComplex((nt, nx), periodic=(False, True), spacing=(dt, dx))
        self.slice_cx = CubicalComplex((nx,), periodic=(True,), spacing=(dx,), lorentzian=False)

    def __repr__(self):
        return f"LorentzGrid({self.nt}×{self.nx}, Δt={self.dt}, Δx={self.dx}, t0={self.t0})"

    @property
    def cfl(self) -> float:
        return self.dt / self.dx

    @property
    def m(self) -> int:
        return 2

    def edge(self, direction: int, i: int, j: int) -> int:
        return self.cx.index[1][((direction,), (i, j % self.nx))]

    def plaquette(self, i: int, j: int) -> int:
        return self.cx.index[2][((0, 1), (i, j % self.nx))]

    def vertex(self, i: int, j: int) -> int:
        return self.cx.index[0][((), (i, j % self.nx))]

    @cached_property
    def x_edges(self) -> np.ndarray:
        """Indices of x-edges, shape (nt, nx)."""
        return np.array([[self.edge(1, i, j) for j in range(self.nx)] for i in range(self.nt)])

    @cached_property
    def t_edges(self) -> np.ndarray:
        return np.array([[self.edge(0, i, j) for j in range(self.nx)] for i in range(self.nt - 1)])

    @cached_property
    def vertices(self) -> np.ndarray:
        return np.array([[self.vertex(i, j) for j in range(self.nx)] for i in range(self.nt)])

    @cached_property
    def D0(self):
        return self.cx.D(0).astype(float)

    @cached_property
    def D1(self):
        return self.cx.D(1).astype(float)

    @cached_property
    def delta1(self):
        return codifferential_matrix(self.cx, 1)

    @cached_property
    def delta2(self):
        return codifferential_matrix(self.cx, 2)

    @cached_property
    def ym_operator(self):
        return (self.delta2 @ self.D1).tocsr()

    @cached_property
    def wave_operator(self):
        return (self.delta1 @ self.D0).tocsr()

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return self.cx.interior(1)

    @cached_property
    def interior_vertices(self) -> np.ndarray:
        return self.cx.interior(0)


@dataclass
class Datum:
    """Initial data on the slice: A^Σ on slice edges and E on slice edges."""

    A: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.E = np.asarray(self.E, dtype=float)
        if self.A.shape != self.E.shape or self.A.ndim != 1:
            raise ContractViolation("A^Σ and E must be 1-cochains on the same slice")


def zero_field(grid: LorentzGrid) -> np.ndarray:
    return np.zeros(grid.cx.n_cells(1))


def curvature(grid: LorentzGrid, A: np.ndarray) -> np.ndarray:
    return grid.D1 @ A


def ym_residual(grid: LorentzGrid, A: np.ndarray) -> np.ndarray:
    """δF(A) on edges with a complete stencil (zero elsewhere)."""
    r = grid.ym_operator @ A
    return np.where(grid.interior_edges, r, 0.0)


def ym_residual_max(grid: LorentzGrid, A: np.ndarray) -> float:
    return float(np.max(np.abs(ym_residual(grid, A)))) if A.size else 0.0


def lorenz_residual(grid: LorentzGrid, A: np.ndarray) -> np.ndarray:
    """δA on vertices with a complete stencil (zero elsewhere)."""
    r = grid.delta1 @ A
    return np.where(grid.interior_vertices, r, 0.0)


def lorenz_residual_max(grid: LorentzGrid, A: np.ndarray) -> float:
    return float(np.max(np.abs(lorenz_residual(grid, A))))


def constraint_residual(grid: LorentzGrid, datum: Datum) -> np.ndarray:
    """δ^vert E on the slice (abelian)."""
    return codifferential_matrix(grid.slice_cx, 1) @ datum.E


def data_extract(grid: LorentzGrid, A: np.ndarray) -> Datum:
    t0 = grid.t0
    F = curvature(grid, A)
    A_s = A[grid.x_edges[t0]]
    f = np.array([F[grid.plaquette(t0, j)] for j in range(grid.nx)]) / (grid.dt * grid.dx)
    return Datum(A_s, f * grid.dx)


def _march(grid: LorentzGrid, op, x: np.ndarray, rhs: np.ndarray, rows_at, cols_at, levels):
    """Solve op·x = rhs level by level for the unknowns cols_at(next level)."""
    op = op.tocsr()
    for i, nxt in levels:
        R, C = rows_at(i), cols_at(nxt)
        x[C] = 0.0
        sub = op[R]
        r = sub @ x - rhs[R]
        coef = sub[:, C]
        diag = coef.diagonal()
        if not np.allclose((coef - sp.diags(diag)).data, 0.0) or np.any(diag == 0):
            raise ContractViolation("explicit step is not diagonal in the next time level")
        x[C] = -r / diag
    return x


def cauchy_solve(grid: LorentzGrid, datum: Datum, tolerance: float = DEFAULT_RESIDUAL_TOL,
                 cfl_max: float = 1.0) -> np.ndarray:
    """Temporal-gauge leapfrog: A_t = 0, A_x at t0 and t0+1 from the datum, then step."""
    if grid.cfl > cfl_max:
        raise ContractViolation(f"CFL ratio {grid.cfl} exceeds {cfl_max}")
    if datum.A.shape[0] != grid.nx:
        raise ContractViolation("datum does not match the grid's slice")
    c = constraint_residual(grid, datum)
    if np.max(np.abs(c)) > tolerance * max(1.0, np.max(np.abs(datum.E))) / grid.dx:
        raise ContractViolation(f"datum violates the constraint (max {np.max(np.abs(c)):.3e})")
    t0, nt = grid.t0, grid.nt
    A = zero_field(grid)
    A[grid.x_edges[t0]] = datum.A
    A[grid.x_edges[t0 + 1]] = datum.A + grid.dt * datum.E
    rhs = np.zeros_like(A)
    xe = grid.x_edges
    _march(grid, grid.ym_operator, A, rhs, lambda i: xe[i], lambda i: xe[i],
           [(i, i + 1) for i in range(t0 + 1, nt - 1)])
    _march(grid, grid.ym_operator, A, rhs, lambda i: xe[i], lambda i: xe[i],
           [(i, i - 1) for i in range(t0, 0, -1)])
    return A


def slice_gauge_match(grid: LorentzGrid, d1: Datum, d2: Datum, tolerance: float = DEFAULT_RESIDUAL_TOL):
    """h^Σ with d1 ◁ h = d2 (A + dh, E unchanged), normalised h[0] = 0, or None."""
    diff = d2.A - d1.A
    scale = max(1.0, float(np.max(np.abs(d1.A))), float(np.max(np.abs(d2.A))))
    if abs(diff.sum()) > tolerance * scale * grid.nx:
        return None
    h = np.concatenate([[0.0], np.cumsum(diff)[:-1]])
    D = grid.slice_cx.D(0).astype(float)
    if np.max(np.abs(D @ h - diff)) > tolerance * scale * grid.nx:
        return None
    if np.max(np.abs(d1.E - d2.E)) > tolerance * max(1.0, float(np.max(np.abs(d1.E)))):
        return None
    return h


def extension_kernel_dimension(grid: LorentzGrid) -> int:
    """dim ker (χ ↦ (dχ, χ|Σ)): components of the lattice graph not meeting the slice."""
    D0 = grid.cx.D(0)
    adj = (abs(D0.T) @ abs(D0)).tocsr()
    n, labels = connected_components(adj, directed=False)
    hit = set(labels[grid.vertices[grid.t0]])
    return n - len(hit)


def gauge_act(grid: LorentzGrid, A: np.ndarray, chi: np.ndarray) -> np.ndarray:
    """A ◁ exp(χ) = A + dχ."""
    return A + grid.D0 @ chi


def gauge_fix_solve(grid: LorentzGrid, A: np.ndarray, tolerance: float = DEFAULT_GAUGE_TOL) -> np.ndarray:
    """χ with δ(A + dχ) = 0: the discrete wave equation □χ = −δA, marched from χ = 0 at the
    first two time levels."""
    chi = np.zeros(grid.cx.n_cells(0))
    rhs = -(grid.delta1 @ A)
    V = grid.vertices
    _march(grid, grid.wave_operator, chi, rhs, lambda i: V[i], lambda i: V[i],
           [(i, i + 1) for i in range(1, grid.nt - 1)])
    res = lorenz_residual_max(grid, gauge_act(grid, A, chi))
    if res > tolerance:
        raise ContractViolation(f"Lorenz gauge solve did not converge (residual {res:.3e})")
    return chi


def random_datum(grid: LorentzGrid, rng: np.random.Generator) -> Datum:
    """Random A^Σ and a constraint-satisfying E (spatially constant in 1+1)."""
    A = rng.standard_normal(grid.nx)
    E = np.full(grid.nx, rng.standard_normal()) * grid.dx
    return Datum(A, E)


# -- parametrized (stacky) well-posedness --------------------------------------------------

@dataclass
class WellposedReport:
    ok: bool
    rows: list = field(default_factory=list)   # (what, point or component, ok, detail)

    def __bool__(self):
        return self.ok


def cauchy_wellposed_check(grid: LorentzGrid, site, U: str, data_by_component: list,
                           slice_gauges_by_point: dict | None = None,
                           tolerance: float = DEFAULT_RESIDUAL_TOL) -> WellposedReport:
    """Existence and uniqueness for a U-parametrized family of data.

    ``data_by_component[c]`` is the datum on the c-th component of U (smooth families are
    constant along U). ``slice_gauges_by_point`` optionally gives a family h_p of slice
    gauge transformations per point; it must be constant on components to extend.
    """
    reg = site.region(U)
    rows = []
    ok = True
    if len(data_by_component) != len(reg.components):
        raise ContractViolation(f"{U} has {len(reg.components)} components")
    kernel = extension_kernel_dimension(grid)
    for c, datum in enumerate(data_by_component):
        A = cauchy_solve(grid, datum, tolerance)
        res = ym_residual_max(grid, A)
        h = slice_gauge_match(grid, data_extract(grid, A), datum, tolerance)
        good = res <= tolerance and h is not None
        rows.append(("existence", c, good, f"ym_residual_max={res:.3e}"))
        rows.append(("uniqueness", c, kernel == 0, f"kernel dimension {kernel}"))
        ok = ok and good and kernel == 0
    if slice_gauges_by_point is not None:
        for comp_idx, comp in enumerate(reg.components):
            vals = [np.asarray(slice_gauges_by_point[v]) for v in sorted(comp, key=str)]
            same = all(np.array_equal(vals[0], v) for v in vals[1:])
            rows.append(("extension", comp_idx, same,
                         "family is smooth along U" if same else "h_p varies along a U-edge"))
            ok = ok and same
    return WellposedReport(ok, rows)

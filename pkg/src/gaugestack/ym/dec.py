"""Discrete exterior calculus on cubical lattices with a Lorentzian (or Euclidean) diagonal metric.

A p-cell is (I, n): a sorted tuple I of p directions and a base vertex n; it spans
n + [0,1]^I. Cochains are vectors over the cells of one degree (in ``cells[p]``
order). Dual cochains of degree k are stored on the primal (m−k)-cells they are
dual to. Direction 0 is time when the signature is Lorentzian.

Hodge convention: ⋆(dx^I) = ε(I^c, I) η(I) (|c*|/|c|) dx^{I^c}, which gives
⋆dt = dx, ⋆dx = dt, ⋆(dt∧dx) = −1 for m = 2 and ⋆⋆ = (−1)^{p(m−p)+s} with s the
number of negative metric directions. The codifferential is δ = (−1)^{m(p+1)} ⋆d⋆
(Lorentzian) or (−1)^{m(p+1)+1} ⋆d⋆ (Euclidean), the formal adjoint of d for
⟨α, β⟩ = Σ α ⋆β.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..errors import ContractViolation


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


class CubicalComplex:
    """Cells of a box of lattice points, optionally periodic and optionally restricted
    to a vertex subset (a cell is present iff all its corners are)."""

    def __init__(self, shape, periodic=None, spacing=None, vertices=None, lorentzian: bool = True):
        self.shape = tuple(int(s) for s in shape)
        self.m = len(self.shape)
        self.periodic = tuple(periodic) if periodic is not None else (False,) * self.m
        self.spacing = tuple(float(h) for h in spacing) if spacing is not None else (1.0,) * self.m
        if any(h <= 0 for h in self.spacing):
            raise ContractViolation("grid spacings must be positive")
        self.lorentzian = lorentzian
        self.eta = tuple(-1 if (lorentzian and a == 0) else 1 for a in range(self.m))
        if vertices is None:
            self.vertex_set = None
        else:
            self.vertex_set = frozenset(tuple(v) for v in vertices)
        self.types = [list(itertools.combinations(range(self.m), p)) for p in range(self.m + 1)]
        self.cells = [self._cells(p) for p in range(self.m + 1)]
        self.index = [{c: k for k, c in enumerate(cs)} for cs in self.cells]

    # geometry

    def shift(self, n, a, step=1):
        n = list(n)
        n[a] += step
        if self.periodic[a]:
            n[a] %= self.shape[a]
        elif not 0 <= n[a] < self.shape[a]:
            return None
        return tuple(n)

    def has_vertex(self, n) -> bool:
        if n is None:
            return False
        if self.vertex_set is not None:
            return n in self.vertex_set
        return all(0 <= x < s for x, s in zip(n, self.shape))

    def corners(self, I, n):
        out = []
        for bits in itertools.product((0, 1), repeat=len(I)):
            v = n
            for a, b in zip(I, bits):
                if b:
                    v = self.shift(v, a)
                    if v is None:
                        return None
            out.append(v)
        return out

    def _cells(self, p):
        base = [n for n in itertools.product(*[range(s) for s in self.shape]) if self.has_vertex(n)]
        out = []
        for I in self.types[p]:
            for n in base:
                cs = self.corners(I, n)
                if cs is not None and all(self.has_vertex(v) for v in cs):
                    out.append((I, n))
        return out

    def n_cells(self, p) -> int:
        return len(self.cells[p])

    def cell_volume(self, I) -> float:
        v = 1.0
        for a in I:
            v *= self.spacing[a]
        return v

    def dual_volume(self, I) -> float:
        v = 1.0
        for a in range(self.m):
            if a not in I:
                v *= self.spacing[a]
        return v

    def complement(self, I) -> tuple:
        return tuple(a for a in range(self.m) if a not in I)

    def eta_of(self, I) -> int:
        s = 1
        for a in I:
            s *= self.eta[a]
        return s

    @property
    def n_negative(self) -> int:
        return sum(1 for e in self.eta if e < 0)

    # operators

    def D(self, p: int) -> sp.csr_matrix:
        """Coboundary on primal p-cochains (integer entries)."""
        return self._D[p]

    @cached_property
    def _D(self):
        out = []
        for p in range(self.m + 1):
            rows, cols, vals = [], [], []
            if p < self.m:
                idx = self.index[p]
                for r, (J, n) in enumerate(self.cells[p + 1]):
                    for k, j in enumerate(J):
                        face = J[:k] + J[k + 1:]
                        sgn = -1 if k % 2 else 1
                        up = self.shift(n, j)
                        rows += [r, r]
                        cols += [idx[(face, up)], idx[(face, n)]]
                        vals += [sgn, -sgn]
            shape = (self.n_cells(p + 1) if p < self.m else 0, self.n_cells(p))
            out.append(sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=shape))
        return out

    def D_dual(self, k: int) -> sp.csr_matrix:
        """Coboundary on dual k-cochains (stored on primal (m−k)-cells)."""
        return self._D_dual[k]

    @cached_property
    def _D_dual(self):
        out = []
        m = self.m
        for k in range(m + 1):
            src_p, dst_p = m - k, m - k - 1
            rows, cols, vals = [], [], []
            if k < m:
                idx = self.index[src_p]
                for r, (Ip, n) in enumerate(self.cells[dst_p]):
                    J = self.complement(Ip)
                    for pos, j in enumerate(J):
                        face = tuple(sorted(Ip + (j,)))
                        sgn = -1 if pos % 2 else 1
                        c_up = (face, n)
                        if c_up in idx:
                            rows.append(r)
                            cols.append(idx[c_up])
                            vals.append(sgn)
                        down = self.shift(n, j, -1)
                        c_dn = (face, down) if down is not None else None
                        if c_dn is not None and c_dn in idx:
                            rows.append(r)
                            cols.append(idx[c_dn])
                            vals.append(-sgn)
            shape = (self.n_cells(dst_p) if k < m else 0, self.n_cells(src_p))
            out.append(sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=shape))
        return out

    def star_signs(self, p: int) -> np.ndarray:
        """ε(I^c, I) η(I) per primal p-cell."""
        out = np.empty(self.n_cells(p), dtype=np.int64)
        for k, (I, _) in enumerate(self.cells[p]):
            out[k] = perm_sign(self.complement(I) + I) * self.eta_of(I)
        return out

    def star_dual_signs(self, p: int) -> np.ndarray:
        """Sign of ⋆ from the dual (m−p)-cell back to the primal p-cell: ε(I, I^c) η(I^c)."""
        out = np.empty(self.n_cells(p), dtype=np.int64)
        for k, (I, _) in enumerate(self.cells[p]):
            Ic = self.complement(I)
            out[k] = perm_sign(I + Ic) * self.eta_of(Ic)
        return out

    def volume_ratio(self, p: int) -> np.ndarray:
        """|c*| / |c| per primal p-cell."""
        return np.array([self.dual_volume(I) / self.cell_volume(I) for I, _ in self.cells[p]])

    def interior(self, p: int) -> np.ndarray:
        """Cells whose full coface stencil is present (δ is exact there)."""
        want = 2 * (self.m - p)
        if p == self.m:
            return np.ones(self.n_cells(p), dtype=bool)
        counts = np.asarray(abs(self.D(p)).sum(axis=0)).ravel()
        return counts == want

    def time_slice(self, axis: int = 0, index: int = 0):
        """Vertices with coordinate ``index`` along ``axis``."""
        return [n for _, n in self.cells[0] if n[axis] == index]


# -- real cochain operators ----------------------------------------------------------

def d(cx: CubicalComplex, omega: np.ndarray, p: int) -> np.ndarray:
    if p >= cx.m:
        raise ContractViolation(f"d of a {p}-cochain on an m = {cx.m} lattice")
    return _apply(cx.D(p), omega)


def _apply(M, x):
    if x.ndim == 1:
        return M @ x
    flat = x.reshape(x.shape[0], -1)
    return (M @ flat).reshape((M.shape[0],) + x.shape[1:])


def _diag(v, x):
    return v.reshape((-1,) + (1,) * (x.ndim - 1)) * x


def hodge(cx: CubicalComplex, omega: np.ndarray, p: int, dual: bool = False) -> np.ndarray:
    """⋆ from primal p to dual (m−p), or (dual=True) from dual (m−p) back to primal p.

    In both cases the array is indexed by primal p-cells.
    """
    if dual:
        return _diag(cx.star_dual_signs(p) / cx.volume_ratio(p), omega)
    return _diag(cx.star_signs(p) * cx.volume_ratio(p), omega)


def codifferential(cx: CubicalComplex, omega: np.ndarray, p: int) -> np.ndarray:
    """δ on primal p-cochains, a primal (p−1)-cochain."""
    if p < 1:
        raise ContractViolation("δ of a 0-cochain")
    m = cx.m
    s = (-1) ** (m * (p + 1)) if cx.lorentzian else (-1) ** (m * (p + 1) + 1)
    a = hodge(cx, omega, p)                      # dual (m−p), on primal p-cells
    b = _apply(cx.D_dual(m - p), a)              # dual (m−p+1), on primal (p−1)-cells
    return s * hodge(cx, b, p - 1, dual=True)


def inner(cx: CubicalComplex, alpha: np.ndarray, beta: np.ndarray, p: int) -> float:
    """Σ α ∧ ⋆β over the lattice (indefinite for Lorentzian signature)."""
    w = cx.star_signs(p) * cx.volume_ratio(p)
    sign = np.array([perm_sign(I + cx.complement(I)) for I, _ in cx.cells[p]])
    return float(np.sum(_diag(w * sign, alpha) * beta))


# -- Lie-algebra valued (matrix) cochains -----------------------------------------------

def wedge(cx: CubicalComplex, alpha: np.ndarray, p: int, beta: np.ndarray, q: int) -> np.ndarray:
    """Point-wise wedge of matrix-valued cochains: all components read at the cell's base node."""
    r = p + q
    if r > cx.m:
        return np.zeros((0,) + alpha.shape[1:], dtype=alpha.dtype)
    idx_a, idx_b = cx.index[p], cx.index[q]
    out = np.zeros((cx.n_cells(r),) + alpha.shape[1:], dtype=np.result_type(alpha, beta))
    for k, (K, n) in enumerate(cx.cells[r]):
        acc = 0
        for I in itertools.combinations(K, p):
            J = tuple(a for a in K if a not in I)
            ia, ib = idx_a.get((I, n)), idx_b.get((J, n))
            if ia is None or ib is None:
                continue
            acc = acc + perm_sign(I + J) * (alpha[ia] @ beta[ib])
        out[k] = acc
    return out


def d_A(cx: CubicalComplex, A: np.ndarray | None, omega: np.ndarray, p: int) -> np.ndarray:
    """d_A ω = dω + A∧ω − (−1)^p ω∧A; A = None means abelian (d_A = d)."""
    out = d(cx, omega, p)
    if A is None:
        return out
    return out + wedge(cx, A, 1, omega, p) - (-1) ** p * wedge(cx, omega, p, A, 1)


def delta_A(cx: CubicalComplex, A: np.ndarray | None, omega: np.ndarray, p: int) -> np.ndarray:
    """δ_A = ±⋆ d_A ⋆ with the codifferential's sign; the inner d_A acts on the dual complex."""
    if A is None:
        return codifferential(cx, omega, p)
    m = cx.m
    s = (-1) ** (m * (p + 1)) if cx.lorentzian else (-1) ** (m * (p + 1) + 1)
    a = hodge(cx, omega, p)
    b = _apply(cx.D_dual(m - p), a)
    # A acting on dual cochains: read A on the primal cell sharing the node; the
    # commutator term is evaluated after mapping back to primal cells
    back = s * hodge(cx, b, p - 1, dual=True)
    comm = _dual_commutator(cx, A, omega, p)
    return back + comm


def _dual_commutator(cx, A, omega, p):
    """The [A, ·] part of δ_A: ±⋆(A∧⋆ω − (−1)^{m−p} ⋆ω∧A), point-wise at base nodes."""
    m = cx.m
    s = (-1) ** (m * (p + 1)) if cx.lorentzian else (-1) ** (m * (p + 1) + 1)
    q = m - p
    star = hodge(cx, omega, p)  # dual q-cochain on primal p-cells; as a form it has type I^c
    # rebuild ⋆ω as a primal q-cochain at the same base node (point-wise reading)
    idx_q = cx.index[q]
    sw = np.zeros((cx.n_cells(q),) + omega.shape[1:], dtype=omega.dtype)
    for k, (I, n) in enumerate(cx.cells[p]):
        j = idx_q.get((cx.complement(I), n))
        if j is not None:
            sw[j] = star[k]
    c = wedge(cx, A, 1, sw, q) - (-1) ** q * wedge(cx, sw, q, A, 1)
    # c is a primal (q+1)-cochain of type J; ⋆ back to degree p−1 at the same node
    idx_c = cx.index[q + 1] if q + 1 <= m else {}
    out = np.zeros((cx.n_cells(p - 1),) + omega.shape[1:], dtype=omega.dtype)
    signs = cx.star_dual_signs(p - 1) / cx.volume_ratio(p - 1)
    for k, (I, n) in enumerate(cx.cells[p - 1]):
        j = idx_c.get((cx.complement(I), n))
        if j is not None:
            out[k] = s * signs[k] * c[j]
    return out


def curvature(cx: CubicalComplex, A: np.ndarray, abelian: bool = True) -> np.ndarray:
    """F = dA (+ A∧A for matrix-valued A)."""
    F = d(cx, A, 1)
    if abelian:
        return F
    return F + wedge(cx, A, 1, A, 1)


# -- modular arithmetic (finite abelian gauge groups Z_n, unit spacing) ------------------

def d_mod(cx: CubicalComplex, omega: np.ndarray, p: int, n: int) -> np.ndarray:
    return np.mod(cx.D(p) @ np.asarray(omega, dtype=np.int64), n)


def codifferential_mod(cx: CubicalComplex, omega: np.ndarray, p: int, n: int) -> np.ndarray:
    """δ with unit spacings, all signs ±1, reduced mod n."""
    if any(h != 1.0 for h in cx.spacing):
        raise ContractViolation("modular DEC needs unit spacings")
    m = cx.m
    s = (-1) ** (m * (p + 1)) if cx.lorentzian else (-1) ** (m * (p + 1) + 1)
    a = cx.star_signs(p) * np.asarray(omega, dtype=np.int64)
    b = cx.D_dual(m - p) @ a
    return np.mod(s * cx.star_dual_signs(p - 1) * b, n)


def codifferential_matrix(cx: CubicalComplex, p: int) -> sp.csr_matrix:
    """δ on primal p-cochains as a sparse matrix (float)."""
    m = cx.m
    s = (-1) ** (m * (p + 1)) if cx.lorentzian else (-1) ** (m * (p + 1) + 1)
    left = sp.diags(s * cx.star_dual_signs(p - 1) / cx.volume_ratio(p - 1))
    right = sp.diags(cx.star_signs(p) * cx.volume_ratio(p))
    return (left @ cx.D_dual(m - p).astype(float) @ right).tocsr()

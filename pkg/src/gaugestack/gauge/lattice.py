"""Finite spacetime lattices with a chart atlas, and the cell-valued gauge data on them.

A lattice instance is a set of integer points in a box; cells are induced (a cell
is present iff all its corners are). Each chart is a vertex subset with its induced
cubical complex; overlaps are intersections. Over a parameter region U, a field is
one point-level field per connected component of U (smooth = locally constant).

Point-level data:
  connection  (vals, g): vals[i] = link variables on chart i's edges, g[(i,j)] = transition
              on the overlap vertices, with A_j = A_i ◁ g_ij on overlap edges and the
              cocycle condition g_ij g_jk = g_ik on triple overlaps.
  p-form      (vals, g): vals[i] = values on chart i's p-cells, compatible by conjugation
              with g_ij at each cell's base vertex.
  bundle      g alone.
A gauge transformation is one group element per (chart, vertex).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from ..errors import ContractViolation, EnumerationLimit, StructuralError
from ..groupoid.core import DEFAULT_MAX_ENUMERATION
from ..groupoid.groups import FiniteGroup, power
from ..ym.dec import CubicalComplex


@dataclass(frozen=True)
class Chart:
    name: str
    vertices: tuple


class LatticeInstance:
    """A finite lattice M, a finite gauge group and a chart atlas with overlaps."""

    def __init__(self, name: str, shape, vertices, charts, group: FiniteGroup,
                 declared_pairs=None, declared_triples=None, slice_index: int = 0,
                 lorentzian: bool = True):
        self.name = name
        self.shape = tuple(shape)
        self.m = len(self.shape)
        self.group = group
        self.vertices = tuple(sorted(tuple(v) for v in vertices))
        vset = set(self.vertices)
        self.cx = CubicalComplex(self.shape, vertices=self.vertices, lorentzian=lorentzian)
        self.charts = []
        for c in charts:
            vs = tuple(sorted(tuple(v) for v in c.vertices))
            if not vs:
                raise StructuralError(f"chart {c.name} is empty")
            if not set(vs) <= vset:
                raise StructuralError(f"chart {c.name} has vertices outside M")
            self.charts.append(Chart(c.name, vs))
        covered = set().union(*[set(c.vertices) for c in self.charts]) if self.charts else set()
        if covered != vset:
            raise StructuralError(f"charts do not cover M (missing {sorted(vset - covered)[:3]})")
        n = len(self.charts)
        self.chart_cx = [CubicalComplex(self.shape, vertices=c.vertices, lorentzian=lorentzian)
                         for c in self.charts]
        for i, c in enumerate(self.charts):
            for p in range(self.m + 1):
                if set(self.chart_cx[i].cells[p]) - set(self.cx.cells[p]):
                    raise StructuralError(f"chart {c.name} is not an induced subcomplex")
        self.pairs = {}
        for i, j in itertools.combinations(range(n), 2):
            common = sorted(set(self.charts[i].vertices) & set(self.charts[j].vertices))
            if common:
                self.pairs[(i, j)] = tuple(common)
        self.triples = {}
        for i, j, k in itertools.combinations(range(n), 3):
            common = sorted(set(self.charts[i].vertices) & set(self.charts[j].vertices)
                            & set(self.charts[k].vertices))
            if common:
                self.triples[(i, j, k)] = tuple(common)
        self._check_declared(declared_pairs, declared_triples)
        self.pair_keys = tuple(sorted(self.pairs))
        self.vidx = [{v: k for k, v in enumerate(c.vertices)} for c in self.charts]
        self.offsets = list(itertools.accumulate([0] + [len(c.vertices) for c in self.charts]))
        if not 0 <= slice_index < self.shape[0]:
            raise StructuralError(f"Cauchy slice index {slice_index} outside the time extent")
        self.slice_index = slice_index

    def _check_declared(self, pairs, triples):
        names = [c.name for c in self.charts]
        if pairs is not None:
            got = {tuple(sorted((names.index(a), names.index(b)))) for a, b in pairs}
            if got != set(self.pairs):
                diff = sorted(got ^ set(self.pairs))
                a, b = diff[0]
                raise StructuralError(f"declared overlap data incomplete or wrong at pair "
                                      f"({names[a]}, {names[b]})")
        if triples is not None:
            got = {tuple(sorted(names.index(a) for a in t)) for t in triples}
            if got != set(self.triples):
                diff = sorted(got ^ set(self.triples))
                raise StructuralError("declared overlap data incomplete or wrong at triple ("
                                      + ", ".join(names[a] for a in diff[0]) + ")")

    def __repr__(self):
        return f"LatticeInstance({self.name}, shape={self.shape}, charts={len(self.charts)}, G={self.group.name})"

    @property
    def chart_names(self) -> tuple:
        return tuple(c.name for c in self.charts)

    # -- gauge transformations ---------------------------------------------------------

    @cached_property
    def point_gauge_group(self) -> FiniteGroup:
        return power(self.group, self.offsets[-1])

    def h_at(self, h, i: int, v):
        return h[self.offsets[i] + self.vidx[i][v]]

    # -- cells ---------------------------------------------------------------------------

    def cells(self, i: int, p: int) -> list:
        return self.chart_cx[i].cells[p] if p <= self.m else []

    @cached_property
    def _edge_ends(self):
        out = []
        for i, cx in enumerate(self.chart_cx):
            out.append([(n, cx.shift(n, I[0])) for I, n in cx.cells[1]])
        return out

    def edge_ends(self, i: int) -> list:
        return self._edge_ends[i]

    def _first_chart(self, p: int) -> dict:
        first = {}
        for i in range(len(self.charts)):
            for c in self.cells(i, p):
                first.setdefault(c, i)
        return first

    # -- point-level transforms ------------------------------------------------------

    def transform(self, kind: str, p: int, i: int, vals: tuple, gfun) -> tuple:
        """Apply a gauge function ``gfun(v)`` on chart i to a cell-valued tuple."""
        G = self.group
        if kind == "connection":
            return tuple(G.mul(G.mul(G.inv(gfun(s)), a), gfun(t))
                         for a, (s, t) in zip(vals, self.edge_ends(i)))
        return tuple(G.mul(G.mul(G.inv(gfun(n)), a), gfun(n))
                     for a, (_, n) in zip(vals, self.cells(i, p)))

    def transition(self, g, i: int, j: int):
        """g_ij as a function of overlap vertices (inverse when i > j)."""
        if i == j:
            return lambda v: self.group.e
        if i < j:
            k = self.pair_keys.index((i, j))
            idx = {v: t for t, v in enumerate(self.pairs[(i, j)])}
            return lambda v: g[k][idx[v]]
        k = self.pair_keys.index((j, i))
        idx = {v: t for t, v in enumerate(self.pairs[(j, i)])}
        return lambda v: self.group.inv(g[k][idx[v]])

    def act_cocycle(self, g, h) -> tuple:
        G = self.group
        out = []
        for (i, j) in self.pair_keys:
            out.append(tuple(G.mul(G.mul(G.inv(self.h_at(h, i, v)), gv), self.h_at(h, j, v))
                             for v, gv in zip(self.pairs[(i, j)], g[self.pair_keys.index((i, j))])))
        return tuple(out)

    def act_point(self, kind: str, p: int, obj, h):
        vals, g = obj
        new = tuple(self.transform(kind, p, i, vals[i], lambda v, i=i: self.h_at(h, i, v))
                    for i in range(len(self.charts)))
        return (new, self.act_cocycle(g, h))

    # -- point-level enumeration ---------------------------------------------------------

    def cocycles(self, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> list:
        G = self.group
        sizes = [len(self.pairs[k]) for k in self.pair_keys]
        total = len(G) ** sum(sizes)
        if total > max_enumeration:
            raise EnumerationLimit(f"{self.name}: {total} transition candidates")
        out = []
        for flat in itertools.product(G.elements, repeat=sum(sizes)):
            g, pos = [], 0
            for s in sizes:
                g.append(tuple(flat[pos:pos + s]))
                pos += s
            g = tuple(g)
            if self.cocycle_failure(g) is None:
                out.append(g)
        return out

    def cocycle_failure(self, g):
        """None, or the first triple overlap (i, j, k) and vertex where g_ij g_jk ≠ g_ik."""
        G = self.group
        for (i, j, k), vs in sorted(self.triples.items()):
            gij, gjk, gik = self.transition(g, i, j), self.transition(g, j, k), self.transition(g, i, k)
            for v in vs:
                if G.mul(gij(v), gjk(v)) != gik(v):
                    return (i, j, k), v
        return None

    def compatibility_failure(self, kind: str, p: int, obj):
        """None, or (i, j, cell) where the chart-j value is not the chart-i value ◁ g_ij."""
        vals, g = obj
        for (i, j) in self.pair_keys:
            gij = self.transition(g, i, j)
            ci, cj = self.cells(i, p), self.cells(j, p)
            idx_j = {c: k for k, c in enumerate(cj)}
            sub = [(k, c) for k, c in enumerate(ci) if c in idx_j]
            if not sub:
                continue
            for k, c in sub:
                if self._move(kind, p, c, vals[i][k], gij) != vals[j][idx_j[c]]:
                    return i, j, c
        return None

    def point_fields(self, kind: str, p: int = 1,
                     max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> list:
        """All compatible point-level (vals, g) for a connection or p-form."""
        G = self.group
        first = self._first_chart(p)
        glob = sorted(first, key=lambda c: (c[0], c[1]))
        cyc = self.cocycles(max_enumeration)
        total = len(cyc) * len(G) ** len(glob)
        if total > max_enumeration:
            raise EnumerationLimit(f"{self.name}: {total} point-level {kind} fields")
        gidx = {c: k for k, c in enumerate(glob)}
        out = []
        for g in cyc:
            for free in itertools.product(G.elements, repeat=len(glob)):
                out.append(self.assemble(kind, p, g, {c: free[gidx[c]] for c in glob}, first))
        return out

    def assemble(self, kind: str, p: int, g, free: dict, first: dict | None = None):
        """Chart values from values given in the frame of each cell's first chart."""
        first = first or self._first_chart(p)
        vals = []
        for j in range(len(self.charts)):
            cells = self.cells(j, p)
            row = []
            for c in cells:
                i = first[c]
                a = free[c]
                if i != j:
                    a = self._move(kind, p, c, a, self.transition(g, i, j))
                row.append(a)
            vals.append(tuple(row))
        return (tuple(vals), g)

    def _move(self, kind, p, cell, a, gfun):
        G = self.group
        I, n = cell
        if kind == "connection":
            t = self.cx.shift(n, I[0])
            return G.mul(G.mul(G.inv(gfun(n)), a), gfun(t))
        return G.mul(G.mul(G.inv(gfun(n)), a), gfun(n))

    def zero_point_field(self, p: int, g) -> tuple:
        return (tuple(tuple(self.group.e for _ in self.cells(i, p)) for i in range(len(self.charts))), g)

    # -- curvature and Yang-Mills residual -------------------------------------------

    def curvature_point(self, obj) -> tuple:
        """Plaquette holonomies per chart (abelian: dA), with the same cocycle."""
        vals, g = obj
        G = self.group
        out = []
        for i, cx in enumerate(self.chart_cx):
            eidx = cx.index[1]
            row = []
            for (a, b), n in (cx.cells[2] if self.m >= 2 else []):
                A = vals[i]
                x1 = A[eidx[((a,), n)]]
                x2 = A[eidx[((b,), cx.shift(n, a))]]
                x3 = A[eidx[((a,), cx.shift(n, b))]]
                x4 = A[eidx[((b,), n)]]
                row.append(G.mul(G.mul(G.mul(x1, x2), G.inv(x3)), G.inv(x4)))
            out.append(tuple(row))
        return (tuple(out), g)

    @property
    def modulus(self) -> int:
        name = self.group.name
        if not (name.startswith("Z") and name[1:].isdigit()):
            raise ContractViolation(f"the Yang-Mills residual needs a cyclic gauge group, got {name}")
        return int(name[1:])

    def _glue(self, p: int, vals) -> dict:
        """Cell values on M from chart values (first chart wins; abelian data agree)."""
        out = {}
        for i in range(len(self.charts)):
            for c, a in zip(self.cells(i, p), vals[i]):
                out.setdefault(c, a)
        return out

    def _per_chart(self, p: int, glob: dict) -> tuple:
        return tuple(tuple(glob[c] for c in self.cells(i, p)) for i in range(len(self.charts)))

    def ym_residual_point(self, obj) -> tuple:
        """δF (abelian, mod n) on the edges of M whose full stencil lies in M, per chart."""
        import numpy as np
        from ..ym.dec import codifferential_mod
        n = self.modulus
        cx = self.cx
        if self.m < 2 or not cx.cells[2]:
            return self._per_chart(1, {c: 0 for c in cx.cells[1]})
        F = self._glue(2, self.curvature_point(obj)[0])
        r = codifferential_mod(cx, np.array([F[c] for c in cx.cells[2]], dtype=np.int64), 2, n)
        r = np.where(cx.interior(1), r, 0)
        return self._per_chart(1, {c: int(x) for c, x in zip(cx.cells[1], r)})

    def lorenz_residual_point(self, obj) -> tuple:
        """δA (abelian, mod n) on the vertices of M whose full stencil lies in M, per chart."""
        import numpy as np
        from ..ym.dec import codifferential_mod
        n = self.modulus
        cx = self.cx
        A = self._glue(1, obj[0])
        r = codifferential_mod(cx, np.array([A[c] for c in cx.cells[1]], dtype=np.int64), 1, n)
        r = np.where(cx.interior(0), r, 0)
        return self._per_chart(0, {c: int(x) for c, x in zip(cx.cells[0], r)})

    # -- sub-instances -----------------------------------------------------------------

    def sub(self, vertices, name: str | None = None) -> "LatticeInstance":
        """Open sub-lattice with the charts intersected (empty intersections dropped)."""
        vs = set(tuple(v) for v in vertices)
        charts = [Chart(c.name, tuple(v for v in c.vertices if v in vs)) for c in self.charts]
        charts = [c for c in charts if c.vertices]
        return LatticeInstance(name or f"{self.name}|sub", self.shape, sorted(vs), charts, self.group,
                               slice_index=self.slice_index, lorentzian=self.cx.lorentzian)

    def restrict_point(self, kind: str, p: int, obj, sub: "LatticeInstance"):
        """Restrict point-level data to a sub-instance built by ``sub``."""
        vals, g = obj
        names = self.chart_names
        new_vals = []
        for j, c in enumerate(sub.charts):
            i = names.index(c.name)
            idx = {cell: k for k, cell in enumerate(self.cells(i, p))}
            new_vals.append(tuple(vals[i][idx[cell]] for cell in sub.cells(j, p)))
        new_g = []
        for (a, b) in sub.pair_keys:
            i, j = names.index(sub.charts[a].name), names.index(sub.charts[b].name)
            gij = self.transition(g, i, j)
            new_g.append(tuple(gij(v) for v in sub.pairs[(a, b)]))
        return (tuple(new_vals), tuple(new_g))

    def restrict_gauge(self, h, sub: "LatticeInstance"):
        names = self.chart_names
        out = []
        for c in sub.charts:
            i = names.index(c.name)
            out.extend(self.h_at(h, i, v) for v in c.vertices)
        return tuple(out)


# -- sample instances -----------------------------------------------------------------

def path3(group: FiniteGroup, two_charts: bool = True) -> LatticeInstance:
    """1D path 0 - 1 - 2; charts {0,1} and {1,2} (or a single chart)."""
    vs = [(0,), (1,), (2,)]
    charts = [Chart("L", ((0,), (1,))), Chart("R", ((1,), (2,)))] if two_charts else [Chart("M", tuple(vs))]
    return LatticeInstance("path3" if two_charts else "path3_single", (3,), vs, charts, group,
                           lorentzian=False)


def path2(group: FiniteGroup) -> LatticeInstance:
    """1D single edge 0 - 1 with one chart."""
    vs = [(0,), (1,)]
    return LatticeInstance("path2", (2,), vs, [Chart("M", tuple(vs))], group, lorentzian=False)


def square(group: FiniteGroup) -> LatticeInstance:
    """One plaquette (t, x) ∈ {0,1}², one chart."""
    vs = [(t, x) for t in range(2) for x in range(2)]
    return LatticeInstance("square", (2, 2), vs, [Chart("M", tuple(vs))], group)


def strip(group: FiniteGroup) -> LatticeInstance:
    """2 × 3 strip (two plaquettes); charts: the whole strip and its right square."""
    vs = [(t, x) for t in range(2) for x in range(3)]
    right = tuple((t, x) for t in range(2) for x in (1, 2))
    return LatticeInstance("strip", (2, 3), vs, [Chart("W", tuple(vs)), Chart("R", right)], group)


SAMPLE_LATTICES = {"path3": path3, "square": square, "strip": strip}

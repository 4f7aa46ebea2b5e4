"""Finite graph sites: regions of a finite graph, reflexive graph maps, declared covers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from ..errors import ContractViolation, StructuralError

PT = "pt"
PT_VERTEX = "*"


@dataclass(frozen=True)
class Region:
    """A subgraph of the ambient graph (or the one-vertex point object)."""

    name: str
    vertices: tuple
    edges: tuple  # oriented pairs (s, t) taken from the ambient edge list

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def contains(self, other: "Region") -> bool:
        return other.vertex_set <= self.vertex_set and other.edge_set <= self.edge_set

    @cached_property
    def components(self) -> tuple[frozenset, ...]:
        """Vertex sets of connected components, in vertex order."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for s, t in self.edges:
            parent[find(s)] = find(t)
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return tuple(frozenset(g) for g in groups.values())

    def component_of(self, v) -> int:
        for k, c in enumerate(self.components):
            if v in c:
                return k
        raise KeyError(v)


@dataclass(frozen=True)
class Morphism:
    """A reflexive graph map src → tgt, stored by the images of src's vertices (in order)."""

    src: str
    tgt: str
    vmap: tuple

    def __repr__(self):
        return f"{self.src}→{self.tgt}{list(self.vmap)}"


@dataclass
class Cover:
    """A covering family {U_i → U} with explicit pair and triple intersections."""

    name: str
    target: str
    members: tuple
    pairs: dict = field(default_factory=dict)    # (i, j), i < j → region name or None
    triples: dict = field(default_factory=dict)  # (i, j, k), i < j < k → region name or None

    def is_trivial(self) -> bool:
        return self.members == (self.target,)

    def intersection(self, idx: tuple):
        """Region name for a nondecreasing index tuple, None when empty."""
        distinct = tuple(sorted(set(idx)))
        if len(distinct) == 1:
            return self.members[distinct[0]]
        if len(distinct) == 2:
            return self.pairs[distinct]
        if len(distinct) == 3:
            return self.triples[distinct]
        raise ValueError("only up to triple intersections are recorded")


class FiniteSite:
    """Regions of one finite graph, plus a terminal point object.

    Morphisms are all maps of vertices that send every edge to an edge (in either
    orientation) or collapse it to a vertex. Covers are families of subregions whose
    union is the target; every object has the trivial cover. A refinement preorder
    is declared per object and must contain a finest cover.
    """

    def __init__(self, name: str, vertices, edges, regions: dict, covers=(), refinements=None,
                 validate: bool = True):
        self.name = name
        self.vertices = tuple(vertices)
        self.edges = tuple(tuple(e) for e in edges)
        self.regions: dict[str, Region] = {}
        for rname, (vs, es) in regions.items():
            if rname == PT:
                raise StructuralError("region name 'pt' is reserved for the point object")
            vs = tuple(v for v in self.vertices if v in set(vs))
            es = tuple(e for e in self.edges if e in {tuple(x) for x in es})
            self.regions[rname] = Region(rname, vs, es)
        self.regions[PT] = Region(PT, (PT_VERTEX,), ())
        self.covers: dict[str, list[Cover]] = {r: [] for r in self.regions}
        for r in self.regions:
            self.covers[r].append(Cover("trivial", r, (r,)))
        for c in covers:
            self.covers[c.target].append(c)
        self.refinements = {r: list(v) for r, v in (refinements or {}).items()}
        self._hom: dict = {}
        if validate:
            self.check()

    # category structure

    @property
    def objects(self) -> tuple:
        return tuple(self.regions)

    def region(self, U: str) -> Region:
        return self.regions[U]

    def _edge_ok(self, tgt: Region, a, b) -> bool:
        return a == b or (a, b) in tgt.edge_set or (b, a) in tgt.edge_set

    def hom(self, V: str, U: str) -> tuple:
        key = (V, U)
        if key in self._hom:
            return self._hom[key]
        src, tgt = self.regions[V], self.regions[U]
        idx = {v: k for k, v in enumerate(src.vertices)}
        out = []
        for vmap in itertools.product(tgt.vertices, repeat=len(src.vertices)):
            if all(self._edge_ok(tgt, vmap[idx[s]], vmap[idx[t]]) for s, t in src.edges):
                out.append(Morphism(V, U, vmap))
        self._hom[key] = tuple(out)
        return self._hom[key]

    def morphisms(self):
        for V in self.regions:
            for U in self.regions:
                yield from self.hom(V, U)

    def identity(self, U: str) -> Morphism:
        return Morphism(U, U, self.regions[U].vertices)

    def apply(self, f: Morphism, v):
        src = self.regions[f.src]
        return f.vmap[src.vertices.index(v)]

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g∘f."""
        if f.tgt != g.src:
            raise ContractViolation(f"cannot compose {g} after {f}")
        return Morphism(f.src, g.tgt, tuple(self.apply(g, w) for w in f.vmap))

    def inclusion(self, V: str, U: str) -> Morphism:
        if not self.regions[U].contains(self.regions[V]):
            raise ContractViolation(f"{V} is not a subregion of {U}")
        return Morphism(V, U, self.regions[V].vertices)

    def corestrict(self, f: Morphism, U: str) -> Morphism | None:
        """f as a map into the subregion U of its target, if its image lies there."""
        tgt = self.regions[U]
        src = self.regions[f.src]
        if not all(w in tgt.vertex_set for w in f.vmap):
            return None
        for s, t in src.edges:
            a, b = self.apply(f, s), self.apply(f, t)
            if not self._edge_ok(tgt, a, b):
                return None
        return Morphism(f.src, U, f.vmap)

    def source_of(self, m: Morphism) -> str:
        return m.src

    def points(self, U: str) -> tuple:
        """Hom(pt, U), one morphism per vertex."""
        return self.hom(PT, U)

    def edge_image(self, f: Morphism, e) -> tuple | None:
        """(edge of the target, ±1) or None when the edge collapses."""
        a, b = self.apply(f, e[0]), self.apply(f, e[1])
        if a == b:
            return None
        tgt = self.regions[f.tgt]
        if (a, b) in tgt.edge_set:
            return (a, b), 1
        return (b, a), -1

    # covers and refinement

    def cover(self, U: str, name: str) -> Cover:
        for c in self.covers[U]:
            if c.name == name:
                return c
        raise KeyError(f"no cover {name!r} of {U}")

    def refines(self, fine: Cover, coarse: Cover) -> bool:
        return all(any(self.regions[c].contains(self.regions[m]) for c in coarse.members)
                   for m in fine.members)

    def top_cover(self, U: str) -> Cover:
        """The declared finest cover of U (it must refine every other cover of U)."""
        names = self.refinements.get(U)
        cands = [self.cover(U, names[0])] if names else list(self.covers[U])
        for c in cands:
            if all(self.refines(c, d) for d in self.covers[U]):
                return c
        raise StructuralError(f"refinement preorder of {U} is not directed (no finest cover)")

    def factor_through_top(self, f: Morphism, j: int):
        """For f : V → U and member V_j of V's finest cover, (i, m : V_j → U_i) with f∘ℓ_j = ℓ_i∘m."""
        cv = self.top_cover(f.src)
        cu = self.top_cover(f.tgt)
        Vj = cv.members[j]
        restricted = self.compose(f, self.inclusion(Vj, f.src)) if Vj != f.src else f
        for i, Ui in enumerate(cu.members):
            m = self.corestrict(restricted, Ui)
            if m is not None:
                return i, m
        raise StructuralError(f"{f} does not carry a member of the finest cover of {f.src} "
                              f"into a member of the finest cover of {f.tgt}")

    def check(self):
        for e in self.edges:
            if e[0] not in self.vertices or e[1] not in self.vertices:
                raise StructuralError(f"edge {e} uses an unknown vertex")
        for r in self.regions.values():
            if r.name == PT:
                continue
            for s, t in r.edges:
                if s not in r.vertex_set or t not in r.vertex_set:
                    raise StructuralError(f"region {r.name}: edge {(s, t)} leaves the region")
        for U, cs in self.covers.items():
            reg = self.regions[U]
            for c in cs:
                self._check_cover(reg, c)
        for U in self.regions:
            self.top_cover(U)

    def _check_cover(self, reg: Region, c: Cover):
        members = [self.regions[m] for m in c.members]
        for m in members:
            if not reg.contains(m):
                raise StructuralError(f"cover {c.name} of {reg.name}: {m.name} is not a subregion")
        vs = set().union(*(m.vertex_set for m in members))
        es = set().union(*(m.edge_set for m in members))
        if vs != reg.vertex_set or es != reg.edge_set:
            raise StructuralError(f"cover {c.name} of {reg.name} does not cover the region")
        n = len(members)
        for i, j in itertools.combinations(range(n), 2):
            self._check_intersection(c, (i, j), [members[i], members[j]])
        for i, j, k in itertools.combinations(range(n), 3):
            self._check_intersection(c, (i, j, k), [members[i], members[j], members[k]])

    def _check_intersection(self, c: Cover, idx, regs):
        table = c.pairs if len(idx) == 2 else c.triples
        if idx not in table:
            raise StructuralError(f"cover {c.name} of {c.target}: intersection {idx} is not declared")
        vs = frozenset.intersection(*(r.vertex_set for r in regs))
        es = frozenset.intersection(*(r.edge_set for r in regs))
        name = table[idx]
        label = "∩".join(r.name for r in regs)
        if name is None:
            if vs:
                raise StructuralError(f"cover {c.name} of {c.target}: {label} is declared empty "
                                      f"but is not")
            return
        r = self.regions[name]
        if r.vertex_set != vs or r.edge_set != es:
            raise StructuralError(f"cover {c.name} of {c.target}: {name} is not {label}")


@dataclass(frozen=True)
class OverArrow:
    """A morphism (V, f) → (W, g) of C/U, carried by m : V → W with g∘m = f."""

    src: tuple
    tgt: tuple
    map: Morphism


class OverSite:
    """The over-category C/U: objects (V, f : V → U); covers are those of V."""

    def __init__(self, site: FiniteSite, U: str):
        self.site = site
        self.base = U
        self.objects = tuple((V, f) for V in site.objects for f in site.hom(V, U))

    def hom(self, a, b) -> tuple:
        (V, f), (W, g) = a, b
        return tuple(OverArrow(a, b, m) for m in self.site.hom(V, W) if self.site.compose(g, m) == f)

    def compose(self, g: OverArrow, f: OverArrow) -> OverArrow:
        return OverArrow(f.src, g.tgt, self.site.compose(g.map, f.map))

    def source_of(self, m: OverArrow):
        return m.src

    def _member(self, a, name):
        V, f = a
        incl = self.site.inclusion(name, V) if name != V else self.site.identity(V)
        return (name, self.site.compose(f, incl)), incl

    def top_members(self, a) -> list:
        out = []
        for m in self.site.top_cover(a[0]).members:
            obj, incl = self._member(a, m)
            out.append((obj, OverArrow(obj, a, incl)))
        return out

    def top_pairs(self, a) -> dict:
        c = self.site.top_cover(a[0])
        out = {}
        for (i, j), name in c.pairs.items():
            if name is None:
                out[i, j] = None
                continue
            obj, _ = self._member(a, name)
            mi, _ = self._member(a, c.members[i])
            mj, _ = self._member(a, c.members[j])
            out[i, j] = (obj, OverArrow(obj, mi, self.site.inclusion(name, c.members[i])),
                         OverArrow(obj, mj, self.site.inclusion(name, c.members[j])))
        return out

    def factor_through_top(self, m: OverArrow, j: int):
        i, mm = self.site.factor_through_top(m.map, j)
        src, _ = self._member(m.src, self.site.top_cover(m.src[0]).members[j])
        tgt, _ = self._member(m.tgt, self.site.top_cover(m.tgt[0]).members[i])
        return i, OverArrow(src, tgt, mm)


# -- sample sites ----------------------------------------------------------------

def interval_site() -> FiniteSite:
    """Path a - b - c with the two-chart cover {V1, V2}, V1 ∩ V2 = V12."""
    V = ("a", "b", "c")
    E = (("a", "b"), ("b", "c"))
    regions = {
        "I": (V, E),
        "V1": (("a", "b"), (("a", "b"),)),
        "V2": (("b", "c"), (("b", "c"),)),
        "V12": (("b",), ()),
    }
    covers = [Cover("charts", "I", ("V1", "V2"), {(0, 1): "V12"}, {})]
    return FiniteSite("interval", V, E, regions, covers, {"I": ["charts"]})


def circle3_site() -> FiniteSite:
    """Triangle 0 - 1 - 2 - 0 covered by its three arcs; the triple overlap is empty."""
    V = (0, 1, 2)
    E = ((0, 1), (1, 2), (0, 2))
    regions = {
        "C": (V, E),
        "A01": ((0, 1), ((0, 1),)),
        "A12": ((1, 2), ((1, 2),)),
        "A02": ((0, 2), ((0, 2),)),
        "P0": ((0,), ()),
        "P1": ((1,), ()),
        "P2": ((2,), ()),
    }
    covers = [Cover("arcs", "C", ("A01", "A12", "A02"),
                    {(0, 1): "P1", (1, 2): "P2", (0, 2): "P0"}, {(0, 1, 2): None})]
    return FiniteSite("circle3", V, E, regions, covers, {"C": ["arcs"]})


def twopoint_site() -> FiniteSite:
    """Two isolated vertices p, q; T = {p, q} is covered by its points, with empty overlap."""
    V = ("p", "q")
    regions = {"T": (V, ()), "P": (("p",), ()), "Q": (("q",), ())}
    covers = [Cover("points", "T", ("P", "Q"), {(0, 1): None}, {})]
    return FiniteSite("twopoint", V, (), regions, covers, {"T": ["points"]})


SAMPLE_SITES = {"interval": interval_site, "circle3": circle3_site, "twopoint": twopoint_site}

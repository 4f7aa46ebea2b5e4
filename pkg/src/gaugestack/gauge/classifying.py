"""Classifying presheaves of a finite gauge group over a graph site.

For a region U: gauge group 𝒢(U) = G^{π₀U} (locally constant maps), connections
𝒜(U) = G^{E(U)} (link variables), p-forms Ω^p(U) = G^{p-cells} (p = 0 vertices,
p = 1 edges). Link variables restrict along a graph map by taking the image edge,
its inverse when the map reverses the edge, and e when the edge collapses.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContractViolation
from ..groupoid.core import ActionGroupoid, GroupoidFunctor, group_groupoid
from ..groupoid.groups import FiniteGroup, power
from ..presheaf.presheaf import PresheafOfGroupoids
from ..presheaf.site import FiniteSite, Morphism

FLAVORS = ("bundle", "connection", "adjoint", "local_system")


@dataclass(frozen=True)
class SiteCalculus:
    """Gauge data of a finite group G over the regions of a graph site."""

    site: FiniteSite
    group: FiniteGroup

    def n_components(self, U: str) -> int:
        return len(self.site.region(U).components)

    def gauge_group(self, U: str) -> FiniteGroup:
        return power(self.group, self.n_components(U))

    def component_map(self, f: Morphism) -> tuple:
        """π₀(f) : components of f.src → components of f.tgt."""
        src, tgt = self.site.region(f.src), self.site.region(f.tgt)
        return tuple(tgt.component_of(self.site.apply(f, next(iter(sorted(c, key=str)))))
                     for c in src.components)

    def restrict_gauge(self, f: Morphism, g: tuple) -> tuple:
        return tuple(g[c] for c in self.component_map(f))

    def restrict_links(self, f: Morphism, A: tuple) -> tuple:
        """Pull back link variables on f.tgt's edges to f.src's edges."""
        G = self.group
        tgt = self.site.region(f.tgt)
        eidx = {e: k for k, e in enumerate(tgt.edges)}
        out = []
        for e in self.site.region(f.src).edges:
            im = self.site.edge_image(f, e)
            if im is None:
                out.append(G.e)
            else:
                edge, sign = im
                a = A[eidx[edge]]
                out.append(a if sign == 1 else G.inv(a))
        return tuple(out)

    def restrict_vertices(self, f: Morphism, phi: tuple) -> tuple:
        tgt = self.site.region(f.tgt)
        vidx = {v: k for k, v in enumerate(tgt.vertices)}
        return tuple(phi[vidx[self.site.apply(f, v)]] for v in self.site.region(f.src).vertices)

    def conj(self, a, g):
        """g⁻¹ a g."""
        G = self.group
        return G.mul(G.mul(G.inv(g), a), g)

    def component_of_vertex(self, U: str) -> tuple:
        reg = self.site.region(U)
        return tuple(reg.component_of(v) for v in reg.vertices)

    def links(self, U: str) -> list:
        import itertools
        return list(itertools.product(self.group.elements, repeat=len(self.site.region(U).edges)))

    def forms(self, U: str, p: int) -> list:
        import itertools
        reg = self.site.region(U)
        n = {0: len(reg.vertices), 1: len(reg.edges)}.get(p, 0)
        return list(itertools.product(self.group.elements, repeat=n))


def classifying_presheaf(calc: SiteCalculus, flavor: str, p: int = 1) -> PresheafOfGroupoids:
    """BG (bundle), BG_con (connection), B(ad G, p) (adjoint) or the local-system stack.

    bundle: one object, automorphisms 𝒢(U) with the opposite point-wise product.
    connection: 𝒜(U) // 𝒢(U) acting by A ◁ g = g⁻¹ A g (g constant on each component).
    adjoint: Ω^p(U) // 𝒢(U) by conjugation.
    local_system: 𝒜(U) // G^{V(U)} acting by A_e ◁ g = g_s⁻¹ A_e g_t.
    """
    if flavor not in FLAVORS:
        raise ContractViolation(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
    site, G = calc.site, calc.group
    name = {"bundle": f"B{G.name}", "connection": f"B{G.name}_con",
            "adjoint": f"Ω{p}(ad {G.name})", "local_system": f"Loc{G.name}"}[flavor]

    if flavor == "bundle":
        def stage(U):
            return group_groupoid(calc.gauge_group(U), opposite=True, name=f"{name}({U})")

        def restrict(f):
            return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda x: x,
                                   lambda g: calc.restrict_gauge(f, g))

        return PresheafOfGroupoids(site, stage, restrict, name=name)

    if flavor == "local_system":
        def stage(U):
            reg = site.region(U)
            vidx = {v: k for k, v in enumerate(reg.vertices)}
            ends = [(vidx[s], vidx[t]) for s, t in reg.edges]

            def act(A, g):
                return tuple(G.mul(G.mul(G.inv(g[s]), a), g[t]) for a, (s, t) in zip(A, ends))

            return ActionGroupoid(calc.links(U), power(G, len(reg.vertices)), act, name=f"{name}({U})")

        def restrict(f):
            return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda A: calc.restrict_links(f, A),
                                   lambda m: (calc.restrict_links(f, m[0]), calc.restrict_vertices(f, m[1])))

        return PresheafOfGroupoids(site, stage, restrict, name=name)

    if flavor == "connection":
        points = calc.links
        restrict_pts = calc.restrict_links
        cell_comp = _edge_components
    else:
        if p not in (0, 1):
            if p < 0:
                raise ContractViolation("form degree must be ≥ 0")
        points = lambda U: calc.forms(U, p)
        restrict_pts = (lambda f, w: calc.restrict_vertices(f, w)) if p == 0 else \
            ((lambda f, w: calc.restrict_links(f, w)) if p == 1 else (lambda f, w: ()))
        cell_comp = _vertex_components if p == 0 else (_edge_components if p == 1 else (lambda c, U: ()))

    def stage(U):
        comps = cell_comp(calc, U)

        def act(w, g):
            return tuple(calc.conj(a, g[c]) for a, c in zip(w, comps))

        return ActionGroupoid(points(U), calc.gauge_group(U), act, name=f"{name}({U})")

    def restrict(f):
        return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda w: restrict_pts(f, w),
                               lambda m: (restrict_pts(f, m[0]), calc.restrict_gauge(f, m[1])))

    return PresheafOfGroupoids(site, stage, restrict, name=name)


def _edge_components(calc: SiteCalculus, U: str) -> tuple:
    reg = calc.site.region(U)
    return tuple(reg.component_of(s) for s, _ in reg.edges)


def _vertex_components(calc: SiteCalculus, U: str) -> tuple:
    return calc.component_of_vertex(U)

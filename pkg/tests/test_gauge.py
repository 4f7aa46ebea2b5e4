import itertools

import pytest

from gaugestack.errors import ContractViolation
from gaugestack.gauge import GaugeContext, path2, path3, square, strip
from gaugestack.gauge.concretify import (compare_with_vertical, concretify, naive_concretify_FS,
                                         recovers_gcon, too_many_objects_witness)
from gaugestack.gauge.stacks import (curvature, data_map, data_stack, essentially_surjective_report,
                                     gbun, gcon_vertical, j_map, lorenz_sol_stack,
                                     mapping_cocycle_groupoid, omega_stack, sol_stack, sol_triple_form)
from gaugestack.groupoid import cyclic
from gaugestack.presheaf import interval_site, is_global_weq, is_stack

MAKERS = {"path3": path3, "square": square, "strip": strip}


def _ctx(name, n=2):
    return GaugeContext(MAKERS[name](cyclic(n)), interval_site())


def _betti1(inst):
    return len(inst.cx.cells[1]) - len(inst.cx.cells[0]) + 1


def _stage_summary(G):
    reps = G.component_reps()
    return len(reps), {G.aut_order(r) for r in reps}


@pytest.mark.parametrize("name,n", [("path3", 2), ("path3", 3), ("square", 2), ("square", 3),
                                    ("strip", 2)])
def test_connections_modulo_gauge_are_holonomy_classes(name, n):
    # abelian gauge theory on a connected graph: classes = |G|^{b1}, stabilizer = constant gauge
    ctx = _ctx(name, n)
    for U in ("pt", "I"):
        comps, auts = _stage_summary(gcon_vertical(ctx).stage(U))
        assert comps == n ** _betti1(ctx.inst)
        assert auts == {n}


@pytest.mark.parametrize("name", sorted(MAKERS))
def test_bundles_on_contractible_lattices(name):
    ctx = _ctx(name)
    comps, auts = _stage_summary(gbun(ctx).stage("pt"))
    assert comps == 1
    assert auts == {2 ** len(ctx.inst.vertices)}


@pytest.mark.parametrize("name,p", [("path3", 0), ("path3", 1), ("square", 1), ("square", 2),
                                    ("strip", 0), ("strip", 2)])
def test_abelian_forms_are_global_cochains(name, p):
    ctx = _ctx(name)
    comps, auts = _stage_summary(omega_stack(ctx, p).stage("pt"))
    assert comps == 2 ** len(ctx.inst.cx.cells[p])
    assert auts == {2 ** len(ctx.inst.vertices)}


def test_form_degree_out_of_range():
    with pytest.raises(ContractViolation):
        omega_stack(_ctx("path3"), 2)


@pytest.mark.parametrize("n", [2, 3])
def test_square_curvature_is_plaquette_holonomy(n):
    ctx = _ctx("square", n)
    inst = ctx.inst
    edges = inst.cells(0, 1)
    # the boundary of the single plaquette, oriented: bottom + right - top - left
    sign = {}
    for (I, v) in edges:
        a = I[0]
        other = 1 - a
        sign[(I, v)] = 1 if v[other] == 0 else -1
        if a == 1:
            sign[(I, v)] = -sign[(I, v)]
    F = curvature(ctx).component("pt")
    flat = 0
    for x in F.source.objects:
        vals = x[0][0][0]
        hol = sum(sign[c] * a for c, a in zip(edges, vals)) % n
        img = F.obj(x)[0][0][0]
        assert (img == (0,)) == (hol == 0)
        flat += hol == 0
    assert flat == n ** 3


@pytest.mark.parametrize("name", ["path3", "square"])
def test_concretify_image_objects_match_full_enumeration(name):
    ctx = _ctx(name)
    conc = concretify(ctx)
    for U in ctx.site.objects:
        C = conc.canonical.component(U)
        brute = {C.obj(x) for x in conc.full.stage(U).objects}
        assert set(conc.result.stage(U).objects) == brute


def test_mapping_cocycle_groupoid_counts():
    ctx = _ctx("path3")
    n_vert = len(gcon_vertical(ctx).point_data())
    for U in ctx.site.objects:
        G = mapping_cocycle_groupoid(ctx, U)
        ne = len(ctx.site.region(U).edges)
        k = ctx.nc(U)
        assert G.n_objects() == n_vert ** k * 2 ** (len(ctx.inst.vertices) * ne)


@pytest.mark.parametrize("name", sorted(MAKERS))
def test_concretify_recovers_vertical_model(name):
    assert bool(compare_with_vertical(concretify(_ctx(name))))


def test_naive_concretification_has_too_many_objects():
    nc = naive_concretify_FS(GaugeContext(path2(cyclic(2)), interval_site()))
    w = too_many_objects_witness(nc, "V1")
    assert w is not None
    assert recovers_gcon(nc)


def test_data_constraint_filter_on_strip():
    ctx = _ctx("strip", 3)
    D = data_stack(ctx)
    S = D.slice
    edges = S.cx.cells[1]
    seen = set()
    for a, E in D.point_data():
        glob = S._glue(1, E)
        e = [glob[c] for c in edges]
        assert e[0] == e[1]
        seen.add(tuple(e))
    assert seen == {(k, k) for k in range(3)}


def test_data_stack_needs_two_dimensions():
    with pytest.raises(ContractViolation):
        data_stack(_ctx("path3"))


@pytest.mark.parametrize("name", ["square", "strip"])
def test_data_map_lands_in_data(name):
    ctx = _ctx(name)
    Sol, D = sol_stack(ctx), data_stack(ctx)
    dm = data_map(ctx, Sol, D)
    for U in ctx.site.objects:
        F = dm.component(U)
        for x in F.source.objects:
            assert F.target.has_object(F.obj(x))


@pytest.mark.parametrize("name", ["square", "strip"])
def test_solutions_are_gauge_invariant(name):
    ctx = _ctx(name)
    Sol = sol_stack(ctx)
    G = gcon_vertical(ctx).stage("pt")
    sols = set(Sol.stage("pt").objects)
    for x in G.objects:
        for m in itertools.islice(G.out(x), 6):
            assert (x in sols) == (G.target(m) in sols)


@pytest.mark.parametrize("name", ["square", "strip"])
def test_lorenz_gauge_meets_every_solution_class(name):
    ctx = _ctx(name)
    Sol = sol_stack(ctx)
    rep = essentially_surjective_report(j_map(lorenz_sol_stack(ctx, Sol), Sol))
    assert all(ok for _, ok, _ in rep)


def test_solutions_as_homotopy_fiber_of_ym():
    _, c = sol_triple_form(_ctx("square"))
    assert bool(is_global_weq(c))


@pytest.mark.parametrize("builder", [gcon_vertical, gbun, sol_stack, data_stack])
def test_gauge_presheaves_are_stacks_on_strip(builder):
    assert is_stack(builder(_ctx("strip"))).ok

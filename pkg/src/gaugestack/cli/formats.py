"""Versioned YAML file formats: sites, presheaf recipes, groupoids, functors, lattices,
lattice fields, grids, grid fields and initial data.

Every file starts with ``gaugestack: <kind>`` and ``version: 1``. ``dump_*`` writes the
canonical text, so ``dump(parse(text)) == text`` for canonical files and
``parse(dump(value)) == value`` for values. Errors carry the line and column of the
offending node.
"""
from __future__ import annotations

from dataclasses import dataclass

import yaml

from ..errors import ParseError, StructuralError
from ..groupoid.core import FiniteGroupoid, GroupoidFunctor
from ..groupoid.groups import FiniteGroup, by_name
from ..presheaf.site import PT, Cover, FiniteSite

VERSION = 1
KINDS = ("site", "presheaf", "groupoid", "functor", "lattice", "lattice_field", "grid",
         "grid_field", "datum")


# -- located YAML documents ----------------------------------------------------------------

class Doc:
    """A parsed YAML tree with the source position of every node."""

    def __init__(self, value, marks: dict, path: str | None):
        self.value = value
        self.marks = marks
        self.path = path

    def error(self, message: str, at: tuple = ()) -> ParseError:
        key = tuple(at)
        while key and key not in self.marks:
            key = key[:-1]
        line, col = self.marks.get(key, (1, 1))
        return ParseError(message, line, col, self.path)

    def get(self, *at, required: bool = True, default=None):
        cur = self.value
        for k in at:
            if isinstance(cur, dict) and k in cur:
                cur = cur[k]
            elif isinstance(cur, list) and isinstance(k, int) and 0 <= k < len(cur):
                cur = cur[k]
            else:
                if not required:
                    return default
                raise self.error(f"missing field {'.'.join(map(str, at))}", at[:-1])
        return cur

    def typed(self, kind, *at, required: bool = True, default=None):
        v = self.get(*at, required=required, default=default)
        if v is default and not required:
            return v
        ok = isinstance(v, kind) and not (kind in (int, float) and isinstance(v, bool))
        if kind is float and isinstance(v, int) and not isinstance(v, bool):
            return float(v)
        if not ok:
            name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
            raise self.error(f"field {'.'.join(map(str, at))} must be {name}", at)
        return v


def _marks(node, path: tuple, marks: dict):
    marks[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
    if isinstance(node, yaml.SequenceNode):
        for i, n in enumerate(node.value):
            _marks(n, path + (i,), marks)
    elif isinstance(node, yaml.MappingNode):
        seen = set()
        for kn, vn in node.value:
            if kn.value in seen:
                raise ParseError(f"duplicate key {kn.value!r}", kn.start_mark.line + 1,
                                 kn.start_mark.column + 1)
            seen.add(kn.value)
            _marks(vn, path + (kn.value,), marks)


def parse_text(text: str, kind: str, path: str | None = None) -> Doc:
    loader = yaml.SafeLoader(text)
    try:
        node = loader.get_single_node()
        if node is None:
            raise ParseError("empty file", 1, 1, path)
        marks: dict = {}
        _marks(node, (), marks)
        value = loader.construct_document(node)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        raise ParseError(f"syntax error: {e.problem or e.context}",
                         mark.line + 1 if mark else 0, mark.column + 1 if mark else 0, path) from None
    except ParseError as e:
        if e.path is None and path is not None:
            raise ParseError(str(e).split(": ", 1)[1], e.line, e.column, path) from None
        raise
    finally:
        loader.dispose()
    doc = Doc(value, marks, path)
    if not isinstance(value, dict):
        raise doc.error("top level must be a mapping")
    got = value.get("gaugestack")
    if got != kind:
        raise doc.error(f"expected a gaugestack {kind} file, found {got!r}", ("gaugestack",))
    if value.get("version") != VERSION:
        raise doc.error(f"unsupported format version {value.get('version')!r} (expected {VERSION})",
                        ("version",))
    return doc


def parse_file(path: str, kind: str) -> Doc:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", 0, 0, path) from None
    return parse_text(text, kind, path)


class _Dumper(yaml.SafeDumper):
    """Short lists of scalars (and lists of those) in flow style, everything else in block style."""


def _is_flat(v, depth: int) -> bool:
    if isinstance(v, list):
        return depth > 0 and all(_is_flat(x, depth - 1) for x in v)
    return not isinstance(v, dict)


def _represent_list(dumper, data):
    return dumper.represent_sequence("tag:yaml.org,2002:seq", data, flow_style=_is_flat(data, 2))


_Dumper.add_representer(list, _represent_list)


def dump(data: dict) -> str:
    return yaml.dump(data, Dumper=_Dumper, sort_keys=False, allow_unicode=True, width=100)


def _header(kind: str) -> dict:
    return {"gaugestack": kind, "version": VERSION}


def _freeze(v):
    """YAML lists → tuples (group elements, vertices)."""
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


def _group(doc: Doc, *at) -> FiniteGroup:
    name = doc.typed(str, *at)
    try:
        return by_name(name)
    except ValueError as e:
        raise doc.error(str(e), at) from None


def _element(doc: Doc, G: FiniteGroup, value, at):
    x = _freeze(value)
    if x not in G:
        raise doc.error(f"{value!r} is not an element of {G.name}", at)
    return x


# -- sites -----------------------------------------------------------------------------------

def parse_site(doc: Doc) -> FiniteSite:
    name = doc.typed(str, "name")
    vertices = [_freeze(v) for v in doc.typed(list, "vertices")]
    edges = [tuple(_freeze(e)) for e in doc.typed(list, "edges")]
    for i, e in enumerate(edges):
        if len(e) != 2 or e[0] not in vertices or e[1] not in vertices:
            raise doc.error(f"edge {list(e)} must join two declared vertices", ("edges", i))
    regions = {}
    for rname, body in doc.typed(dict, "regions").items():
        rv = [_freeze(v) for v in doc.typed(list, "regions", rname, "vertices")]
        re_ = [tuple(_freeze(e)) for e in doc.typed(list, "regions", rname, "edges")]
        for v in rv:
            if v not in vertices:
                raise doc.error(f"region {rname}: unknown vertex {v!r}", ("regions", rname, "vertices"))
        for e in re_:
            if e not in edges:
                raise doc.error(f"region {rname}: unknown edge {list(e)}", ("regions", rname, "edges"))
        regions[str(rname)] = (rv, re_)
    covers = []
    for i, c in enumerate(doc.typed(list, "covers", required=False, default=[])):
        at = ("covers", i)
        cname = doc.typed(str, *at, "name")
        target = doc.typed(str, *at, "object")
        members = tuple(doc.typed(list, *at, "members"))
        for m in members + (target,):
            if m not in regions:
                raise doc.error(f"cover {cname}: unknown region {m!r}", at)
        pairs, triples = {}, {}
        for k, p in enumerate(doc.typed(list, *at, "pairs", required=False, default=[])):
            a, b, r = p
            idx = tuple(sorted((members.index(a), members.index(b))))
            if r is not None and r not in regions:
                raise doc.error(f"cover {cname}: unknown overlap region {r!r}", at + ("pairs", k))
            pairs[idx] = r
        for k, t in enumerate(doc.typed(list, *at, "triples", required=False, default=[])):
            a, b, c_, r = t
            idx = tuple(sorted((members.index(a), members.index(b), members.index(c_))))
            triples[idx] = r
        n = len(members)
        for a in range(n):
            for b in range(a + 1, n):
                if (a, b) not in pairs:
                    raise doc.error(f"cover {cname}: overlap data incomplete at pair "
                                    f"({members[a]}, {members[b]})", at)
        covers.append(Cover(cname, target, members, pairs, triples))
    refinements = doc.get("refinements", required=False, default=None)
    try:
        return FiniteSite(name, vertices, edges, regions, covers, refinements)
    except (StructuralError, KeyError, ValueError) as e:
        raise doc.error(f"invalid site: {e}") from None


def dump_site(site: FiniteSite) -> str:
    data = _header("site")
    data["name"] = site.name
    data["vertices"] = [_thaw(v) for v in site.vertices]
    data["edges"] = [[_thaw(a), _thaw(b)] for a, b in site.edges]
    data["regions"] = {r: {"vertices": [_thaw(v) for v in reg.vertices],
                           "edges": [[_thaw(a), _thaw(b)] for a, b in reg.edges]}
                       for r, reg in site.regions.items() if r != PT}
    covers = []
    for U in site.objects:
        for c in site.covers[U]:
            if c.is_trivial():
                continue
            d = {"name": c.name, "object": c.target, "members": list(c.members),
                 "pairs": [[c.members[i], c.members[j], r] for (i, j), r in sorted(c.pairs.items())]}
            if c.triples:
                d["triples"] = [[c.members[i], c.members[j], c.members[k], r]
                                for (i, j, k), r in sorted(c.triples.items())]
            covers.append(d)
    data["covers"] = covers
    data["refinements"] = {r: list(v) for r, v in site.refinements.items()}
    return dump(data)


# -- presheaf recipes ------------------------------------------------------------------------

@dataclass(frozen=True)
class PresheafSpec:
    """A named recipe: classifying(group, flavor, degree) or constant(group)."""

    name: str
    recipe: str
    group: str
    flavor: str = ""
    degree: int = 1

    def build(self, site: FiniteSite):
        from ..gauge.classifying import SiteCalculus, classifying_presheaf
        from ..groupoid.core import group_groupoid
        from ..presheaf.presheaf import constant_presheaf
        G = by_name(self.group)
        if self.recipe == "constant":
            return constant_presheaf(site, group_groupoid(G), name=self.name)
        X = classifying_presheaf(SiteCalculus(site, G), self.flavor, self.degree)
        X.name = self.name
        return X


def parse_presheaf(doc: Doc) -> PresheafSpec:
    from ..gauge.classifying import FLAVORS
    name = doc.typed(str, "name")
    recipe = doc.typed(str, "recipe")
    _group(doc, "group")
    group = doc.get("group")
    if recipe == "constant":
        return PresheafSpec(name, recipe, group)
    if recipe != "classifying":
        raise doc.error(f"unknown recipe {recipe!r} (classifying or constant)", ("recipe",))
    flavor = doc.typed(str, "flavor")
    if flavor not in FLAVORS:
        raise doc.error(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}", ("flavor",))
    degree = doc.typed(int, "degree", required=False, default=1)
    return PresheafSpec(name, recipe, group, flavor, degree)


def dump_presheaf(spec: PresheafSpec) -> str:
    data = _header("presheaf")
    data.update({"name": spec.name, "recipe": spec.recipe, "group": spec.group})
    if spec.recipe == "classifying":
        data["flavor"] = spec.flavor
        if spec.flavor == "adjoint":
            data["degree"] = spec.degree
    return dump(data)


# -- groupoids and functors -----------------------------------------------------------------

@dataclass(frozen=True)
class GroupoidSpec:
    """Disjoint union of connected groupoids (listed objects) × B(group)."""

    name: str
    components: tuple  # ((objects...), group name)

    def build(self) -> FiniteGroupoid:
        objs, mors = [], []
        comp_of, groups = {}, []
        for c, (ob, gname) in enumerate(self.components):
            G = by_name(gname)
            groups.append(G)
            for x in ob:
                comp_of[x] = c
                objs.append(x)
            mors.extend(((x, y, g), x, y) for x in ob for y in ob for g in G.elements)

        def compose(g, f):
            G = groups[comp_of[f[0]]]
            return (f[0], g[1], G.mul(g[2], f[2]))

        def identity(x):
            return (x, x, groups[comp_of[x]].e)

        def inverse(f):
            return (f[1], f[0], groups[comp_of[f[0]]].inv(f[2]))

        Gd = FiniteGroupoid(objs, mors, compose, identity, inverse, name=self.name)
        Gd.component_groups = groups
        Gd.component_of_object = comp_of
        return Gd


def _groupoid_body(doc: Doc, at: tuple) -> GroupoidSpec:
    name = doc.typed(str, *at, "name")
    comps = []
    seen = set()
    for i, c in enumerate(doc.typed(list, *at, "components")):
        ob = tuple(_freeze(x) for x in doc.typed(list, *at, "components", i, "objects"))
        for x in ob:
            if x in seen:
                raise doc.error(f"object {x!r} appears twice", at + ("components", i, "objects"))
            seen.add(x)
        _group(doc, *at, "components", i, "group")
        comps.append((ob, doc.get(*at, "components", i, "group")))
    return GroupoidSpec(name, tuple(comps))


def _groupoid_data(spec: GroupoidSpec) -> dict:
    return {"name": spec.name,
            "components": [{"objects": [_thaw(x) for x in ob], "group": g} for ob, g in spec.components]}


def parse_groupoid(doc: Doc) -> GroupoidSpec:
    return _groupoid_body(doc, ())


def dump_groupoid(spec: GroupoidSpec) -> str:
    data = _header("groupoid")
    data.update(_groupoid_data(spec))
    return dump(data)


@dataclass(frozen=True)
class FunctorSpec:
    """(x, y, g) ↦ (F x, F y, φ_c(g)) with φ_c given on the generators of each source group."""

    name: str
    source: GroupoidSpec
    target: GroupoidSpec
    objects: tuple          # ((x, Fx), ...)
    homs: tuple             # per source component: images of the group's generators

    def build(self) -> GroupoidFunctor:
        from ..groupoid.groups import homomorphisms
        S, T = self.source.build(), self.target.build()
        omap = dict(self.objects)
        phis = []
        for c, (ob, gname) in enumerate(self.source.components):
            G = by_name(gname)
            tc = T.component_of_object[omap[ob[0]]]
            H = T.component_groups[tc]
            imgs = tuple(self.homs[c])
            match = [phi for phi in homomorphisms(G, H.elements, H.mul, H.e)
                     if tuple(phi[s] for s in G.generators) == imgs]
            if not match:
                raise StructuralError(f"component {c}: generator images {list(imgs)} define no homomorphism")
            phis.append(match[0])
        comp = S.component_of_object
        F = GroupoidFunctor(S, T, lambda x: omap[x],
                            lambda m: (omap[m[0]], omap[m[1]], phis[comp[m[0]]][m[2]]), name=self.name)
        return F


def parse_functor(doc: Doc) -> FunctorSpec:
    name = doc.typed(str, "name")
    S = _groupoid_body(doc, ("source",))
    T = _groupoid_body(doc, ("target",))
    tobjs = {x: c for c, (ob, _) in enumerate(T.components) for x in ob}
    pairs = []
    for i, p in enumerate(doc.typed(list, "objects")):
        if not isinstance(p, list) or len(p) != 2:
            raise doc.error("object map entries are [source, target]", ("objects", i))
        x, y = _freeze(p[0]), _freeze(p[1])
        if y not in tobjs:
            raise doc.error(f"{p[1]!r} is not a target object", ("objects", i))
        pairs.append((x, y))
    omap = dict(pairs)
    homs = []
    for c, (ob, gname) in enumerate(S.components):
        for x in ob:
            if x not in omap:
                raise doc.error(f"object {x!r} has no image", ("objects",))
        if len({tobjs[omap[x]] for x in ob}) != 1:
            raise doc.error(f"source component {c} is not sent into one target component", ("objects",))
        imgs = doc.typed(list, "homs", c)
        homs.append(tuple(_freeze(v) for v in imgs))
    spec = FunctorSpec(name, S, T, tuple(pairs), tuple(homs))
    try:
        spec.build()
    except StructuralError as e:
        raise doc.error(str(e), ("homs",)) from None
    return spec


def dump_functor(spec: FunctorSpec) -> str:
    data = _header("functor")
    data["name"] = spec.name
    data["source"] = _groupoid_data(spec.source)
    data["target"] = _groupoid_data(spec.target)
    data["objects"] = [[_thaw(x), _thaw(y)] for x, y in spec.objects]
    data["homs"] = [[_thaw(v) for v in h] for h in spec.homs]
    return dump(data)


# -- lattices and lattice fields -------------------------------------------------------------

def parse_lattice(doc: Doc):
    from ..gauge.lattice import Chart, LatticeInstance
    name = doc.typed(str, "name")
    G = _group(doc, "group")
    shape = tuple(doc.typed(list, "shape"))
    vertices = [tuple(v) for v in doc.typed(list, "vertices")]
    for i, v in enumerate(vertices):
        if len(v) != len(shape) or any(not 0 <= a < n for a, n in zip(v, shape)):
            raise doc.error(f"vertex {list(v)} outside shape {list(shape)}", ("vertices", i))
    charts = []
    for i, c in enumerate(doc.typed(list, "charts")):
        charts.append(Chart(doc.typed(str, "charts", i, "name"),
                            tuple(tuple(v) for v in doc.typed(list, "charts", i, "vertices"))))
    pairs = [tuple(p) for p in doc.typed(list, "overlaps", "pairs", required=False, default=[])]
    triples = [tuple(t) for t in doc.typed(list, "overlaps", "triples", required=False, default=[])]
    names = [c.name for c in charts]
    for k, p in enumerate(pairs + triples):
        for a in p:
            if a not in names:
                at = ("overlaps", "pairs", k) if k < len(pairs) else ("overlaps", "triples", k - len(pairs))
                raise doc.error(f"unknown chart {a!r} in declared overlap", at)
    signature = doc.typed(str, "signature", required=False, default="lorentzian")
    if signature not in ("lorentzian", "euclidean"):
        raise doc.error("signature must be lorentzian or euclidean", ("signature",))
    slice_index = doc.typed(int, "slice", required=False, default=0)
    try:
        inst = LatticeInstance(name, shape, vertices, charts, G, pairs, triples, slice_index,
                               lorentzian=signature == "lorentzian")
    except StructuralError as e:
        raise doc.error(str(e), ("overlaps",) if "overlap" in str(e) else ("charts",)) from None
    inst.declared = (tuple(pairs), tuple(triples))
    return inst


def dump_lattice(inst) -> str:
    data = _header("lattice")
    data["name"] = inst.name
    data["group"] = inst.group.name
    data["shape"] = list(inst.shape)
    data["vertices"] = [list(v) for v in inst.vertices]
    data["charts"] = [{"name": c.name, "vertices": [list(v) for v in c.vertices]} for c in inst.charts]
    names = inst.chart_names
    data["overlaps"] = {"pairs": [[names[i], names[j]] for i, j in inst.pair_keys],
                        "triples": [[names[i], names[j], names[k]] for i, j, k in sorted(inst.triples)]}
    data["signature"] = "lorentzian" if inst.cx.lorentzian else "euclidean"
    data["slice"] = inst.slice_index
    return dump(data)


def parse_lattice_field(doc: Doc, inst):
    """A point-level cocycle gauge field (vals, g) on ``inst``."""
    G = inst.group
    names = inst.chart_names
    if doc.typed(str, "lattice") != inst.name:
        raise doc.error(f"field is for lattice {doc.get('lattice')!r}, not {inst.name!r}", ("lattice",))
    links = doc.typed(dict, "links")
    vals = []
    for i, c in enumerate(inst.charts):
        if c.name not in links:
            raise doc.error(f"no link variables for chart {c.name}", ("links",))
        rows = doc.typed(list, "links", c.name)
        cells = inst.cells(i, 1)
        table = {}
        for k, r in enumerate(rows):
            at = ("links", c.name, k)
            if not isinstance(r, list) or len(r) != 3:
                raise doc.error("link entries are [axis, base vertex, value]", at)
            key = ((r[0],), tuple(r[1]))
            if key not in set(cells):
                raise doc.error(f"chart {c.name} has no edge along axis {r[0]} at {r[1]}", at)
            table[key] = _element(doc, G, r[2], at)
        missing = [cell for cell in cells if cell not in table]
        if missing:
            raise doc.error(f"chart {c.name}: link variable missing on edge {missing[0]}", ("links", c.name))
        vals.append(tuple(table[cell] for cell in cells))
    trans = doc.typed(list, "transitions", required=False, default=[])
    g = {}
    for k, t in enumerate(trans):
        at = ("transitions", k)
        a, b = doc.typed(str, *at, "pair", 0), doc.typed(str, *at, "pair", 1)
        if a not in names or b not in names:
            raise doc.error(f"unknown chart in transition pair ({a}, {b})", at)
        i, j = names.index(a), names.index(b)
        if (i, j) not in inst.pairs:
            raise doc.error(f"charts ({a}, {b}) do not overlap in declared order", at)
        entries = {tuple(v): _element(doc, G, x, at) for v, x in doc.typed(list, *at, "values")}
        if set(entries) != set(inst.pairs[(i, j)]):
            raise doc.error(f"transition ({a}, {b}) must be given on exactly the overlap vertices", at)
        g[(i, j)] = tuple(entries[v] for v in inst.pairs[(i, j)])
    for (i, j) in inst.pair_keys:
        if (i, j) not in g:
            raise doc.error(f"overlap data incomplete at pair ({names[i]}, {names[j]})", ("transitions",))
    g = tuple(g[k] for k in inst.pair_keys)
    bad = inst.cocycle_failure(g)
    if bad is not None:
        (i, j, k), v = bad
        raise doc.error(f"transition cocycle fails on triple overlap ({names[i]}, {names[j]}, {names[k]}) "
                        f"at vertex {list(v)}", ("transitions",))
    obj = (tuple(vals), g)
    bad = inst.compatibility_failure("connection", 1, obj)
    if bad is not None:
        i, j, cell = bad
        raise doc.error(f"link variables on the overlap of ({names[i]}, {names[j]}) are not related by "
                        f"the transition at edge {cell}", ("links",))
    return obj


def dump_lattice_field(inst, obj) -> str:
    vals, g = obj
    names = inst.chart_names
    data = _header("lattice_field")
    data["lattice"] = inst.name
    data["links"] = {c.name: [[I[0], list(n), _thaw(a)] for (I, n), a in zip(inst.cells(i, 1), vals[i])]
                     for i, c in enumerate(inst.charts)}
    data["transitions"] = [{"pair": [names[i], names[j]],
                            "values": [[list(v), _thaw(x)] for v, x in zip(inst.pairs[(i, j)], gk)]}
                           for (i, j), gk in zip(inst.pair_keys, g)]
    return dump(data)


# -- float grids, fields and data ------------------------------------------------------------

def parse_grid(doc: Doc):
    from ..errors import ContractViolation
    from ..ym.dynamics import LorentzGrid
    nt, nx = doc.typed(int, "nt"), doc.typed(int, "nx")
    dt, dx = doc.typed(float, "dt"), doc.typed(float, "dx")
    t0 = doc.typed(int, "slice", required=False, default=0)
    per = doc.get("periodic", required=False, default=[False, True])
    if per != [False, True]:
        raise doc.error("grids are open in time and periodic in space: periodic: [false, true]", ("periodic",))
    try:
        return LorentzGrid(nt, nx, dt, dx, t0)
    except ContractViolation as e:
        raise doc.error(str(e)) from None


def dump_grid(grid) -> str:
    data = _header("grid")
    data.update({"nt": grid.nt, "nx": grid.nx, "dt": grid.dt, "dx": grid.dx, "slice": grid.t0,
                 "periodic": [False, True]})
    return dump(data)


def _float_rows(doc: Doc, at: tuple, rows: int, cols: int):
    import numpy as np
    v = doc.typed(list, *at)
    if len(v) != rows:
        raise doc.error(f"{at[-1]} must have {rows} rows", at)
    for i, r in enumerate(v):
        if not isinstance(r, list) or len(r) != cols:
            raise doc.error(f"{at[-1]} row {i} must have {cols} entries", at + (i,))
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise doc.error("entries must be numbers", at + (i, j))
    return np.array(v, dtype=float)


def parse_grid_field(doc: Doc, grid):
    """A real 1-cochain on the grid: A_t[i][j] on (i,j)→(i+1,j), A_x[i][j] on (i,j)→(i,j+1)."""
    import numpy as np
    if (doc.get("nt"), doc.get("nx")) != (grid.nt, grid.nx):
        raise doc.error(f"field shape {doc.get('nt')}×{doc.get('nx')} does not match the grid", ("nt",))
    At = _float_rows(doc, ("A_t",), grid.nt - 1, grid.nx)
    Ax = _float_rows(doc, ("A_x",), grid.nt, grid.nx)
    A = np.zeros(grid.cx.n_cells(1))
    A[grid.t_edges] = At
    A[grid.x_edges] = Ax
    return A


def dump_grid_field(grid, A) -> str:
    data = _header("grid_field")
    data.update({"nt": grid.nt, "nx": grid.nx,
                 "A_t": [[float(x) for x in row] for row in A[grid.t_edges]],
                 "A_x": [[float(x) for x in row] for row in A[grid.x_edges]]})
    return dump(data)


def parse_datum(doc: Doc, grid=None):
    import numpy as np
    from ..ym.dynamics import Datum
    nx = doc.typed(int, "nx")
    if grid is not None and nx != grid.nx:
        raise doc.error(f"datum has nx = {nx}, grid has nx = {grid.nx}", ("nx",))
    A = np.array(_float_rows_flat(doc, "A", nx))
    E = np.array(_float_rows_flat(doc, "E", nx))
    return Datum(A, E)


def _float_rows_flat(doc: Doc, key: str, n: int):
    v = doc.typed(list, key)
    if len(v) != n:
        raise doc.error(f"{key} must have {n} entries", (key,))
    for j, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise doc.error("entries must be numbers", (key, j))
    return [float(x) for x in v]


def dump_datum(datum) -> str:
    data = _header("datum")
    data.update({"nx": int(datum.A.shape[0]), "A": [float(x) for x in datum.A],
                 "E": [float(x) for x in datum.E]})
    return dump(data)

import os

import pytest

from gaugestack.cli import formats as fm
from gaugestack.cli.samples import sample_files, tri3
from gaugestack.errors import ParseError
from gaugestack.groupoid import cyclic

SAMPLES = sample_files()
LATTICES = {n: fm.parse_lattice(fm.parse_text(t, "lattice")) for n, t in SAMPLES.items()
            if n.endswith(".lat")}
LATTICE_BY_NAME = {inst.name: inst for inst in LATTICES.values()}
GRID_FOR = {"small_solution.gf": "small.grd", "small_random.gf": "small.grd"}


def _kind(name, text):
    return text.split("\n", 1)[0].split(": ", 1)[1]


def _roundtrip(name, text):
    kind = _kind(name, text)
    doc = fm.parse_text(text, kind, name)
    if kind == "site":
        return fm.dump_site(fm.parse_site(doc))
    if kind == "presheaf":
        return fm.dump_presheaf(fm.parse_presheaf(doc))
    if kind == "groupoid":
        return fm.dump_groupoid(fm.parse_groupoid(doc))
    if kind == "functor":
        return fm.dump_functor(fm.parse_functor(doc))
    if kind == "lattice":
        return fm.dump_lattice(fm.parse_lattice(doc))
    if kind == "lattice_field":
        inst = LATTICE_BY_NAME[doc.get("lattice")]
        return fm.dump_lattice_field(inst, fm.parse_lattice_field(doc, inst))
    if kind == "grid":
        return fm.dump_grid(fm.parse_grid(doc))
    if kind == "grid_field":
        grid = fm.parse_grid(fm.parse_text(SAMPLES[GRID_FOR[name]], "grid"))
        return fm.dump_grid_field(grid, fm.parse_grid_field(doc, grid))
    if kind == "datum":
        return fm.dump_datum(fm.parse_datum(doc))
    raise AssertionError(kind)


ROUNDTRIP = sorted(n for n in SAMPLES if n != "broken_cocycle.gf")


@pytest.mark.parametrize("name", ROUNDTRIP)
def test_dump_parse_roundtrip_is_identity(name):
    assert _roundtrip(name, SAMPLES[name]) == SAMPLES[name]


def test_shipped_instances_are_current():
    here = os.path.join(os.path.dirname(__file__), "..", "instances")
    for name, text in SAMPLES.items():
        with open(os.path.join(here, name), encoding="utf-8") as fh:
            assert fh.read() == text, name


def _err(text, kind):
    with pytest.raises(ParseError) as e:
        fm.parse_text(text, kind, "x.yml")
    return e.value


def test_syntax_error_has_location():
    e = _err("gaugestack: site\nversion: 1\nname: [unclosed\n", "site")
    assert e.path == "x.yml" and e.line >= 3 and e.column >= 1


def test_duplicate_key_location():
    e = _err("gaugestack: site\nversion: 1\nname: a\nname: b\n", "site")
    assert (e.line, e.column) == (4, 1)
    assert "duplicate key 'name'" in str(e)


def test_wrong_kind_and_version():
    e = _err("gaugestack: grid\nversion: 1\n", "site")
    assert e.line == 1 and "expected a gaugestack site file" in str(e)
    e = _err("gaugestack: site\nversion: 2\n", "site")
    assert e.line == 2 and "unsupported format version" in str(e)


def test_empty_file():
    assert "empty file" in str(_err("", "site"))


def test_missing_field_points_at_parent():
    doc = fm.parse_text("gaugestack: grid\nversion: 1\nnt: 8\n", "grid", "g.grd")
    with pytest.raises(ParseError) as e:
        fm.parse_grid(doc)
    assert "missing field" in str(e.value)


def test_wrong_type_is_reported_at_the_field():
    text = SAMPLES["small.grd"].replace("nt: 8", "nt: eight")
    doc = fm.parse_text(text, "grid", "g.grd")
    with pytest.raises(ParseError) as e:
        fm.parse_grid(doc)
    assert e.value.line == 3 and "nt must be int" in str(e.value)


def test_broken_cocycle_names_the_triple_overlap():
    inst = tri3(cyclic(2))
    doc = fm.parse_text(SAMPLES["broken_cocycle.gf"], "lattice_field", "broken_cocycle.gf")
    with pytest.raises(ParseError) as e:
        fm.parse_lattice_field(doc, inst)
    assert "transition cocycle fails on triple overlap (A, B, C) at vertex [1]" in str(e.value)
    assert str(e.value).startswith("broken_cocycle.gf:")


def test_missing_cover_pair_is_reported():
    text = SAMPLES["circle3.site"].replace("pairs: [[A01, A12, P1], [A01, A02, P0], [A12, A02, P2]]",
                                           "pairs: [[A01, A12, P1], [A01, A02, P0]]")
    doc = fm.parse_text(text, "site", "c.site")
    with pytest.raises(ParseError) as e:
        fm.parse_site(doc)
    assert "overlap data incomplete at pair (A12, A02)" in str(e.value)


def test_missing_transition_pair_is_reported():
    text = SAMPLES["tri3_good.gf"]
    head, _, _ = text.partition("transitions:")
    doc = fm.parse_text(head + "transitions: []\n", "lattice_field", "t.gf")
    with pytest.raises(ParseError) as e:
        fm.parse_lattice_field(doc, tri3(cyclic(2)))
    assert "overlap data incomplete at pair (A, B)" in str(e.value)


def test_unreadable_file():
    with pytest.raises(ParseError) as e:
        fm.parse_file("/nonexistent/file.site", "site")
    assert "cannot read file" in str(e.value)

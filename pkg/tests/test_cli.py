import io
import json
import os
import subprocess
import sys

import pytest

from gaugestack.cli.main import main

INST = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "instances")


def _p(name):
    return os.path.join(INST, name)


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("argv,code", [
    (["check-groupoid", _p("z2_two_objects.grp")], 0),
    (["weq", _p("include.fun")], 0),
    (["weq", _p("collapse.fun")], 1),
    (["hofib", _p("point_to_bz2.fun"), _p("point_to_bz2.fun")], 0),
    (["holim", _p("circle3.site"), _p("bg_s3.psh"), "C"], 0),
    (["check-stack", _p("circle3.site"), _p("bg_s3.psh")], 0),
    (["check-stack", _p("circle3.site"), _p("const_bz2.psh")], 1),
    (["sheafify", _p("twopoint.site"), _p("bg_z2.psh")], 0),
    (["s1-local", "--count", "3"], 0),
    (["im-vs-im1", "--count", "3"], 0),
    (["concretify", _p("path3.lat")], 0),
    (["compare-fs", _p("path2.lat")], 0),
    (["curvature", _p("square_z3.lat"), _p("square_curved.gf")], 0),
    (["check-sol", _p("square_z3.lat"), _p("square_flat.gf")], 0),
    (["ym-residual", _p("small.grd"), _p("small_solution.gf")], 0),
    (["ym-residual", _p("small.grd"), _p("small_random.gf")], 1),
    (["extract-data", _p("small.grd"), _p("small_solution.gf")], 0),
    (["cauchy", _p("small.grd"), _p("small_datum.gf")], 0),
    (["cauchy-check", _p("small.grd"), _p("small_datum.gf"), "--gauge-family", "smooth"], 0),
    (["cauchy-check", _p("small.grd"), _p("small_datum.gf"), "--gauge-family", "nonsmooth"], 1),
    (["lorenz-fix", _p("small.grd"), _p("small_solution.gf")], 0),
    (["lorenz-fix", _p("square.lat")], 0),
    (["curvature", _p("tri3.lat"), _p("broken_cocycle.gf")], 2),
    (["check-stack", _p("circle3.site")], 2),
    (["check-stack", _p("circle3.site"), _p("missing.psh")], 2),
    (["weq", _p("circle3.site")], 2),
    (["no-such-command"], 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_broken_cocycle_message(capsys):
    code = main(["curvature", _p("tri3.lat"), _p("broken_cocycle.gf")], out=io.StringIO())
    err = capsys.readouterr().err
    assert code == 2
    assert "broken_cocycle.gf:13:1: transition cocycle fails on triple overlap (A, B, C) at vertex [1]" in err


def test_check_stack_witness_line():
    _, out = run("check-stack", _p("circle3.site"), _p("const_bz2.psh"))
    assert "witness: object C, cover arcs = (A01, A12, A02)" in out
    assert out.rstrip().endswith("result: fail (witness: C / arcs)")


def test_cauchy_prints_residual_bound():
    _, out = run("cauchy", _p("grid2d.grd"), _p("datum.gf"))
    assert "ym_residual_max < 1.0e-10" in out


def test_cauchy_writes_solution(tmp_path):
    target = tmp_path / "sol.gf"
    code, _ = run("cauchy", _p("small.grd"), _p("small_datum.gf"), "-o", target)
    assert code == 0
    code, _ = run("ym-residual", _p("small.grd"), target)
    assert code == 0


def test_json_lines_output():
    code, out = run("weq", _p("collapse.fun"), "--format", "json-lines")
    assert code == 1
    events = [json.loads(line) for line in out.splitlines()]
    assert events[-1]["event"] == "result" and events[-1]["ok"] is False
    assert all(list(e) == sorted(e) for e in events)


@pytest.mark.parametrize("argv", [
    ["report"],
    ["s1-local", "--count", "3", "--seed", "0"],
    ["check-stack", _p("circle3.site"), _p("const_bz2.psh"), "--format", "json-lines"],
])
def test_output_is_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gaugestack", "weq", _p("include.fun")],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert "weak_equivalence: true" in r.stdout

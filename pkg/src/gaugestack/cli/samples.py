"""Sample input files for the command line (``python3 -m gaugestack.cli.samples DIR``)."""
from __future__ import annotations

import os
import sys

import numpy as np

from ..gauge.lattice import Chart, LatticeInstance, path2, path3, square, strip
from ..groupoid.groups import cyclic
from ..presheaf.site import circle3_site, interval_site, twopoint_site
from ..ym.dynamics import LorentzGrid, cauchy_solve, random_datum
from . import formats as fm


def tri3(group) -> LatticeInstance:
    """1D path 0 - 1 - 2 with charts A = {0,1}, B = {1,2}, C = {0,1,2}; triple overlap {1}."""
    vs = [(0,), (1,), (2,)]
    charts = [Chart("A", ((0,), (1,))), Chart("B", ((1,), (2,))), Chart("C", tuple(vs))]
    return LatticeInstance("tri3", (3,), vs, charts, group, lorentzian=False)


def _copy_field(inst, free: dict, g):
    """Chart values from one global edge assignment (transitions must be trivial)."""
    vals = tuple(tuple(free[c] for c in inst.cells(i, 1)) for i in range(len(inst.charts)))
    return (vals, g)


def _trivial_g(inst):
    return tuple(tuple(inst.group.e for _ in inst.pairs[k]) for k in inst.pair_keys)


def sample_files() -> dict:
    """File name → canonical text."""
    out = {}
    for site in (circle3_site(), interval_site(), twopoint_site()):
        out[f"{site.name}.site"] = fm.dump_site(site)
    out["bg_s3.psh"] = fm.dump_presheaf(fm.PresheafSpec("BG_S3", "classifying", "S3", "local_system"))
    out["bg_z2.psh"] = fm.dump_presheaf(fm.PresheafSpec("BG_Z2", "classifying", "Z2", "bundle"))
    out["const_bz2.psh"] = fm.dump_presheaf(fm.PresheafSpec("const_BZ2", "constant", "Z2"))

    z2, z3 = cyclic(2), cyclic(3)
    for inst in (path3(z2), path2(z2), square(z2), strip(z2), tri3(z2)):
        out[f"{inst.name}.lat"] = fm.dump_lattice(inst)
    sq3 = square(z3)
    sq3.name = "square_z3"
    out["square_z3.lat"] = fm.dump_lattice(sq3)

    # a flat and a curved field on the Z3 square, a flat field on the Z2 strip
    e_sq = {c: 0 for c in sq3.cells(0, 1)}
    out["square_flat.gf"] = fm.dump_lattice_field(sq3, _copy_field(sq3, e_sq, ()))
    curved = dict(e_sq)
    curved[sq3.cells(0, 1)[0]] = 1
    out["square_curved.gf"] = fm.dump_lattice_field(sq3, _copy_field(sq3, curved, ()))
    st = strip(z2)
    out["strip_flat.gf"] = fm.dump_lattice_field(st, _copy_field(st, {c: 1 for c in st.cx.cells[1]},
                                                                  _trivial_g(st)))
    t3 = tri3(z2)
    good_g = _trivial_g(t3)
    out["tri3_good.gf"] = fm.dump_lattice_field(t3, _copy_field(t3, {c: 0 for c in t3.cx.cells[1]}, good_g))
    bad_g = list(good_g)
    bad_g[t3.pair_keys.index((0, 1))] = (1,)
    out["broken_cocycle.gf"] = fm.dump_lattice_field(t3, _copy_field(t3, {c: 0 for c in t3.cx.cells[1]},
                                                                      tuple(bad_g)))

    rng = np.random.default_rng(2024)
    big = LorentzGrid(64, 64, 0.5 / 64, 1 / 64)
    out["grid2d.grd"] = fm.dump_grid(big)
    out["datum.gf"] = fm.dump_datum(random_datum(big, rng))
    small = LorentzGrid(8, 16, 0.5 / 16, 1 / 16)
    out["small.grd"] = fm.dump_grid(small)
    d = random_datum(small, rng)
    out["small_datum.gf"] = fm.dump_datum(d)
    out["small_solution.gf"] = fm.dump_grid_field(small, cauchy_solve(small, d))
    out["small_random.gf"] = fm.dump_grid_field(small, rng.standard_normal(small.cx.n_cells(1)))

    bz2 = fm.GroupoidSpec("BZ2", ((("*",), "Z2"),))
    two = fm.GroupoidSpec("Z2_two_objects", ((("a", "b"), "Z2"),))
    pt = fm.GroupoidSpec("point", ((("*",), "1"),))
    out["z2_two_objects.grp"] = fm.dump_groupoid(two)
    out["include.fun"] = fm.dump_functor(fm.FunctorSpec("include", bz2, two, (("*", "a"),), ((1,),)))
    out["collapse.fun"] = fm.dump_functor(fm.FunctorSpec("collapse", bz2, pt, (("*", "*"),), ((0,),)))
    out["point_to_bz2.fun"] = fm.dump_functor(fm.FunctorSpec("basepoint", pt, bz2, (("*", "*"),), ((),)))
    out["bz2_identity.fun"] = fm.dump_functor(fm.FunctorSpec("identity", bz2, bz2, (("*", "*"),), ((1,),)))
    return out


def write_samples(directory: str) -> list:
    os.makedirs(directory, exist_ok=True)
    names = []
    for name, text in sample_files().items():
        with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
            fh.write(text)
        names.append(name)
    return names


if __name__ == "__main__":
    for n in write_samples(sys.argv[1] if len(sys.argv) > 1 else "instances"):
        print(n)

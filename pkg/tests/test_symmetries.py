import itertools
import random

import pytest

from corkforge.hyp import (IdealTriangulation, automorphisms, isomorphisms, mcg_bound_report,
                           symmetries_report)
from corkforge.hyp.report import core_lengths, sweep_fillings
from corkforge.hyp.triangulation import perm_compose, perm_inverse, perm_sign

EVEN = [p for p in itertools.permutations(range(4)) if perm_sign(p) == 1]


def relabel(tri, seed):
    """Same triangulation with shuffled tetrahedra and even vertex relabellings."""
    rng = random.Random(seed)
    n = tri.num_tetrahedra
    sigma = list(range(n))
    rng.shuffle(sigma)
    rho = [rng.choice(EVEN) for _ in range(n)]
    gluings = [None] * n
    for t in range(n):
        faces = [None] * 4
        for f in range(4):
            tn, perm = tri.gluings[t][f]
            new = perm_compose(perm_compose(rho[tn], perm), perm_inverse(rho[t]))
            faces[rho[t][f]] = (sigma[tn], new)
        gluings[sigma[t]] = tuple(faces)
    cusps = []
    for pair in tri.cusps:
        new_pair = []
        for curve in pair:
            c = [[[0] * 4 for _ in range(4)] for _ in range(n)]
            for t in range(n):
                for v in range(4):
                    for f in range(4):
                        c[sigma[t]][rho[t][v]][rho[t][f]] = curve[t][v][f]
            new_pair.append(tuple(tuple(tuple(r) for r in tv) for tv in c))
        cusps.append(tuple(new_pair))
    # cusps are numbered by vertex class, which the relabelling reorders
    new_index = IdealTriangulation(tuple(gluings)).cusp_index()
    where = {}
    for (t, v), c in tri.cusp_index().items():
        where[c] = new_index[(sigma[t], rho[t][v])]
    ordered = [None] * len(cusps)
    for c, pair in enumerate(cusps):
        ordered[where[c]] = pair
    return IdealTriangulation(tuple(gluings), tuple(ordered))


def test_reference_groups(fig8, whitehead, fig8_3tet):
    g = automorphisms(fig8)
    assert g.order == 8 and g.orientation_reversing == 4
    g = automorphisms(whitehead)
    assert g.order == 8 and g.orientation_reversing == 0
    assert automorphisms(fig8_3tet).order == 2


def test_isomorphisms_to_self_are_the_automorphisms(fig8, whitehead):
    for tri in (fig8, whitehead):
        assert tuple(isomorphisms(tri, tri)) == automorphisms(tri).elements


def test_size_mismatch_gives_no_isomorphisms(fig8, fig8_3tet, whitehead):
    assert isomorphisms(fig8, fig8_3tet) == []
    assert isomorphisms(fig8, whitehead) == []


@pytest.mark.parametrize("seed", range(5))
def test_relabelled_copy_is_isomorphic(whitehead, seed):
    other = relabel(whitehead, seed)
    isos = isomorphisms(whitehead, other)
    assert len(isos) == 8
    for iso in isos:
        for t in range(whitehead.num_tetrahedra):
            for f in range(4):
                tn, fn, glue = whitehead.glued(t, f)
                dn, dfn, dglue = other.glued(iso.tets[t], iso.perms[t][f])
                assert dn == iso.tets[tn] and dfn == iso.perms[tn][fn]


def test_group_table_is_a_group(whitehead):
    g = automorphisms(whitehead)
    ident = next(i for i, e in enumerate(g.elements) if e.is_identity())
    for i, row in enumerate(g.table):
        assert sorted(row) == list(range(g.order))
        assert row[ident] == i
    flags = g.orientation_flags
    for i, j in itertools.product(range(g.order), repeat=2):
        assert flags[g.table[i][j]] == flags[i] * flags[j]


def test_whitehead_cusp_action(whitehead):
    maps = {tuple(e.cusp_map(whitehead, whitehead)) for e in automorphisms(whitehead).elements}
    assert maps == {(0, 1), (1, 0)}


def test_symmetries_report_exactness(fig8, fig8_3tet):
    rep = symmetries_report(fig8)
    assert rep["status"] == "verified" and rep["isometry_count"] == {"value": 8, "exact": True}
    rep = symmetries_report(fig8_3tet)
    assert rep["status"] == "partial" and not rep["isometry_count"]["exact"]


def test_mcg_bound_report_figure_eight(fig8):
    rep = mcg_bound_report(fig8, [("1", "n")], range(5, 9))
    assert rep["status"] == "verified"
    assert rep["bound"] == {"isometry_order": 8, "exact": True, "orientation_reversing": 4}
    assert rep["certified_range"] == [5, 8]
    assert [a["id"] for a in rep["assumptions"]] == ["mostow", "shortest_core"]
    lengths = [v[0] for _, v in core_lengths(rep)]
    assert lengths == sorted(lengths, reverse=True)


def test_mcg_bound_truncates_at_failure(fig8):
    rep = mcg_bound_report(fig8, [("1", "n")], [0, 5, 6])
    # slope 1/0 is not hyperbolic; nothing beyond it is reported
    assert rep["status"] == "partial"
    assert rep["certified_range"] is None and rep["fillings"] == []
    assert any("truncated at n = 0" in d for d in rep["diagnostics"])


def test_whitehead_report_tracks_two_cores(whitehead):
    rep = mcg_bound_report(whitehead, [("1", "n"), ("1", "n")], [5, 6])
    assert rep["status"] == "verified"
    for entry in rep["fillings"]:
        assert len(entry["cores"]) == 2
        a, b = (c["real_length"] for c in entry["cores"])
        assert abs(a - b) < 1e-12
    assert abs(rep["fillings"][0]["cores"][0]["real_length"] - 0.12351454247) < 1e-9


def test_sweep_is_independent_of_job_count(fig8):
    one = sweep_fillings(fig8, [("-1", "2*n")], range(3, 7), jobs=1)
    two = sweep_fillings(fig8, [("-1", "2*n")], range(3, 7), jobs=2)
    assert one == two
    assert [e["slopes"] for e in one] == [[[-1, 2 * n]] for n in range(3, 7)]

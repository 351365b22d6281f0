import cmath
import math

import pytest

from corkforge.hyp import (ConvergenceError, bloch_wigner, core_length, gluing_system,
                           solve_shapes, volume)

FIG8_VOLUME = 2.029883212819307
WHITEHEAD_VOLUME = 3.6638623767088743
Z_REGULAR = complex(0.5, math.sqrt(3) / 2)

# gluing equations of the same triangulations as printed by SnapPy
# (form "rect": exponents of z, z', z'' per tetrahedron)
FIG8_ROWS = [[2, 1, 0, 1, 0, 2], [0, 1, 2, 1, 2, 0], [1, 0, 0, 0, -1, 0],
             [0, 0, 0, 0, -2, 2]]
WHITEHEAD_ROWS = [[2, 0, 1, 1, 2, 0, 1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1],
                  [0, 0, 1, 1, 0, 0, 1, 2, 0, 1, 2, 0], [0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1],
                  [0, 0, -1, 0, 0, 0, 0, 0, 1, 0, -1, 0], [0, -1, -1, 1, 0, 1, 0, 1, 0, 0, -1, 0],
                  [0, -1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0], [-1, 0, 0, 0, 1, 0, -1, 0, -1, 1, 0, 1]]

# (slope, volume, core complex length) for fillings of the figure-eight knot
FIG8_FILLINGS = [((1, 5), 1.9186023775528378, complex(0.0694425556, 1.2530915822)),
                 ((1, 7), 1.97246019733057, complex(0.0361697363, 0.8961997527)),
                 ((1, 20), 2.022771633780859, complex(0.00452121038, 0.31409453929))]


def _flat(system):
    return [[x for triple in row for x in triple] for row in system.rows]


def test_rows_match_reference(fig8, whitehead):
    assert _flat(gluing_system(fig8)) == FIG8_ROWS
    assert _flat(gluing_system(whitehead)) == WHITEHEAD_ROWS


def test_edge_rows_account_for_every_edge(fig8, whitehead):
    for tri in (fig8, whitehead):
        s = gluing_system(tri)
        edges = [r for r, k in zip(s.rows, s.kinds) if k == "edge"]
        assert len(edges) == tri.num_tetrahedra
        # each tetrahedron has six edges, two of each shape type
        assert sum(sum(t) for r in edges for t in r) == 6 * tri.num_tetrahedra
        assert [t for t, k in zip(s.targets, s.kinds) if k == "edge"] == [1] * len(edges)


def test_filling_row_replaces_cusp_rows(fig8):
    s = gluing_system(fig8, [(1, 5)])
    assert s.kinds == ("edge", "edge", "filling")
    assert s.targets[-1] == 1


def test_bad_slopes_are_rejected(fig8):
    with pytest.raises(ValueError):
        gluing_system(fig8, [(2, 4)])
    with pytest.raises(ValueError):
        gluing_system(fig8, [(1, 0), (1, 0)])


def test_complete_figure_eight(fig8):
    shapes, info = solve_shapes(gluing_system(fig8))
    for z in shapes:
        assert abs(z - Z_REGULAR) < 1e-12
    assert info["residual"] < 1e-12
    assert abs(volume(shapes) - FIG8_VOLUME) < 1e-12


def test_complete_whitehead(whitehead):
    shapes, _ = solve_shapes(gluing_system(whitehead))
    expected = [1 + 1j, 0.5 + 0.5j, 0.5 + 0.5j, 0.5 + 0.5j]
    assert max(abs(z - w) for z, w in zip(shapes, expected)) < 1e-11
    assert abs(volume(shapes) - WHITEHEAD_VOLUME) < 1e-11


def test_start_at_solution_converges_at_once(fig8):
    system = gluing_system(fig8)
    shapes, _ = solve_shapes(system)
    _, info = solve_shapes(system, start=shapes)
    assert info["iterations"] <= 2


@pytest.mark.parametrize("slope,vol,core", FIG8_FILLINGS)
def test_filling_volume_and_core(fig8, slope, vol, core):
    shapes, _ = solve_shapes(gluing_system(fig8, [slope]))
    assert abs(volume(shapes) - vol) < 1e-11
    geo = core_length(fig8, [slope], shapes, 0)
    assert abs(geo.complex_length - core) < 1e-9
    assert geo.real_length == geo.complex_length.real > 0


def test_core_length_independent_of_complement(fig8):
    slope = (1, 7)
    shapes, _ = solve_shapes(gluing_system(fig8, [slope]))
    base = core_length(fig8, [slope], shapes, 0)
    for k in (-2, 1, 3):
        r, s = base.complement
        other = core_length(fig8, [slope], shapes, 0, (r + k * slope[0], s + k * slope[1]))
        assert abs(other.complex_length - base.complex_length) < 1e-12
    with pytest.raises(ValueError):
        core_length(fig8, [slope], shapes, 0, (2, 0))


def test_whitehead_double_filling(whitehead):
    slopes = [(1, 5), (1, 5)]
    shapes, _ = solve_shapes(gluing_system(whitehead, slopes))
    assert abs(volume(shapes) - 3.273448735666151) < 1e-11
    for c in (0, 1):
        core = core_length(whitehead, slopes, shapes, c).complex_length
        assert abs(core - complex(0.12351454247, 1.25690108887)) < 1e-9


def test_core_of_unfilled_cusp_is_an_error(fig8):
    shapes, _ = solve_shapes(gluing_system(fig8))
    with pytest.raises(ValueError):
        core_length(fig8, None, shapes, 0)


def test_bloch_wigner_values():
    assert abs(bloch_wigner(Z_REGULAR) - 1.0149416064096536) < 1e-14
    assert bloch_wigner(complex(0.3, 0)) == 0
    z = complex(0.2, 0.7)
    # D(z) = D(1 - 1/z) and D(conj z) = -D(z)
    assert abs(bloch_wigner(1 - 1 / z) - bloch_wigner(z)) < 1e-14
    assert abs(bloch_wigner(z.conjugate()) + bloch_wigner(z)) < 1e-14


def test_hopeless_start_raises(fig8):
    with pytest.raises(ConvergenceError):
        solve_shapes(gluing_system(fig8), start=[cmath.rect(1, 0.0) * 1e-30] * 2, max_iter=3)

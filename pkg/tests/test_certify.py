import threading

import pytest
from mpmath import iv

from corkforge.hyp import (CANONICAL, NOT_CANONICAL, canonical_verify, certify_geometric,
                           certify_report, gluing_system, solve_shapes)
from corkforge.hyp.certify import certified_shapes, select_square


def _solve(tri, slopes=None):
    return solve_shapes(gluing_system(tri, slopes))[0]


def _contains(box, z):
    (rlo, rhi), (ilo, ihi) = box
    return rlo <= z.real <= rhi and ilo <= z.imag <= ihi


@pytest.mark.parametrize("slopes", [None, [(1, 5)], [(1, 20)], [(-1, 12)]])
def test_figure_eight_structures_certify(fig8, slopes):
    shapes = _solve(fig8, slopes)
    cert = certify_geometric(fig8, slopes, shapes)
    assert cert.verified
    for box, z in zip(cert.boxes, shapes):
        assert _contains(box, z)
        assert box[1][0] > 0


def test_whitehead_structures_certify(whitehead):
    for slopes in (None, [(1, 5), (1, 5)], [None, (1, 6)]):
        assert certify_geometric(whitehead, slopes, _solve(whitehead, slopes)).verified


def test_square_system_drops_a_dependent_edge_row(fig8):
    rows, why = select_square(gluing_system(fig8))
    assert len(rows) == 2 and "dropped" in why


def test_perturbed_shapes_do_not_certify(fig8):
    shapes = _solve(fig8)
    for offset in (0.3, 0.1j, -0.1 + 0.1j):
        cert = certify_geometric(fig8, None, [z + offset for z in shapes])
        assert not cert.verified


def test_flat_solution_is_rejected(fig8):
    # the (1, 1) filling has a real solution; Krawczyk succeeds but the
    # boxes meet the real axis
    shapes = _solve(fig8, [(1, 1)])
    cert = certify_geometric(fig8, [(1, 1)], shapes)
    assert not cert.verified
    assert "real axis" in cert.diagnostics[-1]


def test_lower_half_plane_solution_is_rejected(fig8):
    geometric = _solve(fig8, [(5, 1)])
    mirrored = solve_shapes(gluing_system(fig8, [(5, 1)]),
                            start=[z.conjugate() for z in geometric])[0]
    assert all(z.imag < 0 for z in mirrored)
    assert gluing_system(fig8, [(5, 1)]).residual(mirrored) < 1e-12
    cert = certify_geometric(fig8, [(5, 1)], mirrored)
    assert not cert.verified
    assert "real axis" in cert.diagnostics[-1]


def test_unhyperbolic_filling_fails(fig8):
    rep = certify_report(fig8, [(1, 0)])
    assert rep["status"] == "failed"


def test_wrong_shape_count(fig8):
    assert not certify_geometric(fig8, None, [0.5 + 0.8j]).verified


def test_certified_shapes_need_verification(fig8):
    cert = certify_geometric(fig8, None, [0.1 + 0.1j, 0.2 + 0.1j])
    with pytest.raises(ValueError):
        certified_shapes(cert)


def test_concurrent_certification_is_deterministic(fig8, whitehead):
    jobs = [(fig8, None), (fig8, [(1, 9)]), (whitehead, None), (whitehead, [(1, 5), (1, 5)])]
    inputs = [(tri, s, _solve(tri, s)) for tri, s in jobs]
    serial = [certify_geometric(*a) for a in inputs]
    prec = iv.prec
    out = [None] * (4 * len(inputs))

    def work(k):
        out[k] = certify_geometric(*inputs[k % len(inputs)])

    threads = [threading.Thread(target=work, args=(k,)) for k in range(len(out))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert out == serial * 4
    assert iv.prec == prec


def test_canonical_verdicts(fig8, whitehead, fig8_3tet):
    for tri, expected in ((fig8, -0.3102016197), (whitehead, -0.29289321881)):
        shapes = _solve(tri)
        verdict, sums = canonical_verify(tri, shapes, certify_geometric(tri, None, shapes))
        assert verdict == CANONICAL
        for lo, hi in sums.values():
            assert lo <= hi < 0
            assert abs((lo + hi) / 2 - expected) < 1e-9
    shapes = _solve(fig8_3tet)
    verdict, sums = canonical_verify(fig8_3tet, shapes,
                                     certify_geometric(fig8_3tet, None, shapes))
    assert verdict == NOT_CANONICAL
    assert any(lo > 0 for lo, _ in sums.values())


def test_canonical_verify_needs_complete_verified_structure(fig8):
    shapes = _solve(fig8)
    bad = certify_geometric(fig8, None, [z + 0.3 for z in shapes])
    with pytest.raises(ValueError):
        canonical_verify(fig8, shapes, bad)
    filled = _solve(fig8, [(1, 6)])
    with pytest.raises(ValueError):
        canonical_verify(fig8, filled, certify_geometric(fig8, [(1, 6)], filled))

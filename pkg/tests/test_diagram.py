from dataclasses import replace

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from conftest import hopf, mazur_pair, unknot
from corkforge.kirby import (Crossing, DiagramError, HandleDiagram, Passage, boundary_surgery,
                             build_diagram, determinant, first_homology, linking_matrix,
                             validate_diagram)
from corkforge.kirby.linking import smith_invariants
from corkforge.kirby.random import random_diagram


def test_crossingless_unknot_is_valid():
    assert validate_diagram(unknot()).valid


def test_self_crossing_dotted_circle_is_invalid():
    # a one-crossing curl on a dotted circle
    d = build_diagram([("j", "dotted", None, [(0, "o"), (0, "u")])], {0: 1})
    rep = validate_diagram(d)
    assert not rep.valid
    assert "dotted-convention" in rep.codes()


def test_flipped_passage_reports_the_pair():
    d = mazur_pair()
    (p,) = d.passages["j"]
    bad = replace(d, passages={"j": (replace(p, sign=-p.sign),)})
    rep = validate_diagram(bad)
    assert "passage-sum" in rep.codes()
    v = next(v for v in rep.violations if v.code == "passage-sum")
    assert set(v.where) == {"j", "h"}


def test_dangling_arc_is_reported():
    d = hopf()
    x = d.crossings[0]
    bad = replace(d, crossings=(replace(x, under_out=99),) + d.crossings[1:])
    rep = validate_diagram(bad)
    assert not rep.valid and "arcs" in rep.codes()


def test_two_dotted_circles_may_not_cross():
    rep = validate_diagram(hopf("dotted", "dotted"))
    assert "dotted-convention" in rep.codes()


def test_marked_components_carry_no_framing():
    d = hopf()
    comps = (replace(d.components[0], role="marked", framing=3),) + d.components[1:]
    assert "framing" in validate_diagram(replace(d, components=comps)).codes()


def test_json_round_trip_is_canonical(cork):
    text = cork.to_json()
    again = HandleDiagram.from_json(text)
    assert again.to_json() == text
    shuffled = replace(cork, components=tuple(reversed(cork.components)),
                       crossings=tuple(reversed(cork.crossings)))
    assert shuffled.to_json() == text


def test_unknown_version_is_rejected(cork):
    data = cork.to_dict()
    data["version"] = "kirby-diagram/9"
    with pytest.raises(DiagramError):
        HandleDiagram.from_dict(data)


def test_linking_matrix_examples():
    assert linking_matrix(hopf()) == [[0, 1], [1, 0]]
    assert linking_matrix(unknot(framing=5)) == [[5]]
    assert linking_matrix(mazur_pair()) == [[0, 1], [1, 0]]
    assert linking_matrix(hopf(sign=-1, fa=2)) == [[2, -1], [-1, 0]]


def test_odd_crossing_sum_raises():
    d = hopf()
    # corrupt data: a third crossing between the two components
    odd = replace(d, crossings=d.crossings + (Crossing(*d.crossings[0].arcs(), 1),))
    with pytest.raises(DiagramError):
        linking_matrix(odd)


def test_boundary_surgery_coefficients(cork):
    s = boundary_surgery(mazur_pair())
    assert [str(c.coefficient) for c in s.components] == ["0", "0"]
    s = boundary_surgery(cork)
    coeffs = {c.id: c.coefficient for c in s.components}
    assert coeffs["j"] == 0 and coeffs["h"] == 0 and coeffs["mu"] is None


def test_first_homology_examples():
    assert first_homology([[0, 1], [1, 0]]).trivial
    g = first_homology([[0]])
    assert g.rank == 1 and g.torsion == ()
    g = first_homology([[2]])
    assert g.rank == 0 and g.torsion == (2,)
    with pytest.raises(DiagramError):
        first_homology([[0, 1], [2, 0]])


@pytest.mark.parametrize("seed", range(40))
def test_smith_invariants_match_sympy(seed):
    import random
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    rows = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
    ours = [x for x in smith_invariants(rows, n) if x]
    theirs = [abs(int(x)) for x in invariant_factors(Matrix(rows), domain=ZZ) if x]
    assert ours == theirs


@pytest.mark.parametrize("seed", range(30))
def test_determinant_matches_sympy(seed):
    d = random_diagram(seed)
    m = linking_matrix(d)
    assert determinant(m) == (Matrix(m).det() if m else 1)


def test_passages_schema_error():
    with pytest.raises(DiagramError):
        HandleDiagram.from_dict({"components": [{"id": "a"}]})


def test_passage_on_wrong_arc_is_reported():
    d = mazur_pair()
    bad = replace(d, passages={"j": (Passage("h", 1, arc=d.component("j").arcs[0]),)})
    assert "passages" in validate_diagram(bad).codes()

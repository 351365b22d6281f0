import random

from hypothesis import given, settings, strategies as st

from corkforge.kirby import (GroupPresentation, boundary_surgery, detect_cancel_and_reduce,
                             handle_homology, linking_matrix, pi1_presentation, role_swap,
                             tietze_simplify, validate_diagram)
from corkforge.kirby.moves import boundary_det
from corkforge.kirby.random import random_diagram, random_slide
from corkforge.recipes import instantiate_family
from corkforge.recipes.families import chiral_family, nonstrong_family, nonstrong_partner_family

seeds = st.integers(min_value=0, max_value=10 ** 9)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_abelianization_matches_linking_presentation(seed):
    d = random_diagram(seed)
    assert validate_diagram(d).valid
    assert pi1_presentation(d).abelianization() == handle_homology(d)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_linking_matrix_is_symmetric(seed):
    m = linking_matrix(random_diagram(seed))
    assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_role_swap_keeps_boundary_bytes(seed):
    d = random_diagram(seed, swappable=True)
    out = role_swap(d, "d", "s")
    assert boundary_surgery(out).to_json() == boundary_surgery(d).to_json()
    assert boundary_det(out) == boundary_det(d)
    assert role_swap(out, "s", "d") == d


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_slides_preserve_det_and_abelianization(seed):
    d = random_diagram(seed)
    got = random_slide(d, random.Random(seed))
    if got is not None:
        out = got[0]
        assert boundary_det(out) == boundary_det(d)
        assert pi1_presentation(out).abelianization() == pi1_presentation(d).abelianization()


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_cancellation_preserves_det(seed):
    d = random_diagram(seed)
    assert boundary_det(detect_cancel_and_reduce(d).diagram) == boundary_det(d)


words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=8)


@settings(max_examples=150, deadline=None)
@given(st.lists(words, max_size=4))
def test_tietze_preserves_abelianization_stepwise(rels):
    p = GroupPresentation(3, tuple(tuple(r) for r in rels))
    res = tietze_simplify(p, budget=200, record=True)
    ab = p.abelianization()
    assert res.abelianization == ab
    for _, _, q in res.history:
        assert q.abelianization() == ab
    if res.trivial:
        assert ab.trivial


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=-6, max_value=6))
def test_family_instances_are_valid(n):
    for fam in (nonstrong_family(), nonstrong_partner_family(), chiral_family()):
        assert validate_diagram(instantiate_family(fam, n)).valid

"""Twist-family templates built from the Akbulut cork.

The published drawings of these families are not available as data, so the
templates are reconstructions with the stated combinatorial properties:

* ``nonstrong_family``: the symmetric double of the cork with a single
  clasp between the two 2-handles (so that ``h`` and ``h'`` form a Hopf
  link) and one pair of symmetric n-twist boxes on the 2-handles.
* ``chiral_family``: the cork beside its rotated mirror image with the
  roles of the right-hand pair exchanged, and two twist boxes between the
  2-handle on the left and the dotted circle on the right whose parameters
  are exchanged, with opposite signs, by the rotation.
"""

from ..kirby.diagram import DOTTED, TWO_HANDLE, DiagramError, require_valid
from ..kirby.moves import BandSpec, handle_slide, role_swap
from ..kirby.planar import Faces
from ..kirby.sketch import Sketch
from .double import Clasp, PairedTwist, TangleModification, derive_partner, symmetric_double
from .family import LinearForm, TwistFamily
from .library import akbulut_cork
from .symmetry import (MIRROR, ROTATION, DiagramSymmetry, apply_symmetry, disjoint_union,
                       relabel, rotate_mirror, symmetry_between)

NONSTRONG = "nonstrong"
CHIRAL = "chiral"


def nonstrong_family(clasp=0, box=(1, 5)):
    """Template ``W_n``: double of the cork with a clasp at arc index
    ``clasp`` of ``h`` and n-twist boxes between arc indices ``box`` of
    ``h`` and the image box on ``h'``."""
    c = akbulut_cork()
    arcs = c.component("h").arcs
    mod = TangleModification((Clasp(arcs[clasp], 1),
                              PairedTwist(arcs[box[0]], arcs[box[1]], "n")))
    w, f = symmetric_double(c, None, mod)
    return TwistFamily(w, "n", 1, {"kind": NONSTRONG, "modification": mod.to_dict(),
                                   "symmetry": f.to_dict()})


def nonstrong_partner_family(fam=None):
    """Template ``W_n'``: the right-hand pair of ``W_n`` with roles swapped."""
    fam = fam or nonstrong_family()
    meta = dict(fam.meta, partner=True)
    return TwistFamily(derive_partner(fam.template), fam.parameter, fam.rule, meta)


def clasp_slide(w, slider="h", over="h'"):
    """Slide of ``slider`` over ``over`` along a band next to their first
    shared crossing, subtracting the push-off.  This is a reconstruction of
    the slide drawn with the family."""
    owner = w.arc_owner()
    for x in w.crossings:
        pair = {owner[x.over_in]: x.over_in, owner[x.under_in]: x.under_in}
        if set(pair) == {slider, over}:
            band = BandSpec(pair[slider], pair[over], -1)
            return handle_slide(w, slider, over, band), band
    raise DiagramError(f"{slider} and {over} do not cross")


def _swap_map(ids, suffix):
    out = {}
    for cid in ids:
        out[cid] = cid + suffix
        out[cid + suffix] = cid
    return out


def chiral_family(box=(0, 2), sides=(1, -1), suffix="-"):
    """Template ``W_n`` of the chiral family and the rotation data.

    Left: the cork (dotted ``j``, 2-handle ``h``, meridian ``mu``).  Right:
    the rotated mirror of the cork with ``j-`` a 2-handle and ``h-``
    dotted.  Box one holds ``n`` twists between arc indices ``box`` of
    ``h`` and ``h-``; box two is its rotated image with ``-n``.
    """
    c = akbulut_cork()
    img, _ = rotate_mirror(c, ROTATION)
    img, _ = rotate_mirror(img, MIRROR)
    offset = max(a for x in c.components for a in x.arcs) + 1
    right = role_swap(relabel(img, offset, suffix), "j" + suffix, "h" + suffix)
    u = disjoint_union(c, right, "chiral")
    comp_map = _swap_map([x.id for x in c.components], suffix)
    arc_map = {}
    for x in c.components:
        a1, a2 = u.component(x.id).arcs, u.component(x.id + suffix).arcs
        arc_map.update(zip(a1, a2))
        arc_map.update(zip(a2, a1))
    a = c.component("h").arcs[box[0]]
    b = u.component("h" + suffix).arcs[box[1]]
    owner = u.arc_owner()
    sk = Sketch.from_diagram(u)

    def anchor(arc):
        cid = owner[arc]
        return cid, sk.visits[cid][u.component(cid).arcs.index(arc)].uid

    up, down = str(LinearForm.parse("n")), str(-LinearForm.parse("n"))
    boxes = (("b1", a, b, up, sides[0]), ("b2", arc_map[a], arc_map[b], down, sides[1]))
    for rid, p, q, param, side in boxes:
        sk.regions[rid] = {"anchors": [anchor(p), anchor(q)], "parameter": param,
                           "orientation": "parallel", "side": side}
    w = require_valid(sk.to_diagram())
    sym = DiagramSymmetry(ROTATION, comp_map, arc_map, regions={"b1": "b2", "b2": "b1"}, order=2)
    return TwistFamily(w, "n", 1, {"kind": CHIRAL, "suffix": suffix, "symmetry": sym.to_dict()})


def symmetry_from_dict(data):
    return DiagramSymmetry(data["kind"], dict(data["components"]),
                           {int(k): v for k, v in data["arcs"].items()},
                           tuple(data.get("crossings", ())), dict(data.get("regions", {})),
                           int(data.get("order", 1)))


def mirror_partner(w, suffix="-"):
    """``-W_n`` obtained by rotating ``W_n`` and exchanging the roles of
    both 1-/2-handle pairs.  Returns the diagram and the rotation."""
    comp_map = _swap_map([c.id for c in w.components if not c.id.endswith(suffix)], suffix)
    mirror, _ = rotate_mirror(w, MIRROR)
    sym = symmetry_between(ROTATION, comp_map, w, mirror)
    rotated = apply_symmetry(sym, w)
    for p, q in (("j", "h"), ("j" + suffix, "h" + suffix)):
        roles = rotated.component(p).role, rotated.component(q).role
        if roles == (DOTTED, TWO_HANDLE):
            rotated = role_swap(rotated, p, q)
        elif roles == (TWO_HANDLE, DOTTED):
            rotated = role_swap(rotated, q, p)
    return rotated, sym

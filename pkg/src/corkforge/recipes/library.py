"""Built-in diagrams: the Akbulut cork and the twist-family templates."""

from dataclasses import replace

from ..kirby.diagram import DOTTED, MARKED, TWO_HANDLE, DiagramError, Passage, require_valid
from ..kirby.linking import linking_number
from ..kirby.planar import Faces, disk_passages
from ..kirby.sketch import Sketch, build_diagram

# The dotted circle is a line (closed through infinity) meeting the
# 2-handle at 8 points numbered along it.  The 2-handle visits them in
# this order, leaving point 0 upwards; the string gives the layer of the
# dotted circle at each point.
_CORK_ORDER = (0, 7, 6, 3, 2, 1, 4, 5)
_CORK_LAYERS = "oouoouou"


def meander_diagram(order, layers, dotted="j", framed="h", framing=0):
    """Two-component diagram of a line and a simple closed curve meeting it
    at the points ``order`` (in the curve's traversal order).  Neither
    component crosses itself, so both can carry a dot."""
    n = len(order)
    if sorted(order) != list(range(n)) or len(layers) != n:
        raise DiagramError("meander data must visit every point once")
    signs = {}
    for k, p in enumerate(order):
        up = 1 if k % 2 == 0 else -1
        # the line runs left to right; over it the sign is the curve's direction
        signs[p] = up if layers[p] == "o" else -up
    line = [(p, layers[p]) for p in range(n)]
    curve = [(p, "u" if layers[p] == "o" else "o") for p in order]
    return build_diagram([(dotted, DOTTED, None, line),
                          (framed, TWO_HANDLE, framing, curve)], signs)


def add_meridian(d, cid, name, arc=None, sign=1):
    """Add a marked meridian ``name`` of ``cid`` as a small clasp around one
    of its arcs, linking it ``sign`` times.  Passage lists that exist for
    ``cid`` get the new passage."""
    comp = d.component(cid)
    if name in d.ids():
        raise DiagramError(f"component {name} already exists")
    arc = comp.arcs[0] if arc is None else arc
    if arc not in comp.arcs:
        raise DiagramError(f"arc {arc} is not on {cid}")
    for first in ("u", "o"):
        for reverse in (False, True):
            sk = Sketch.from_diagram(d)
            vs = sk.visits[cid]
            anchor = vs[comp.arcs.index(arc)].uid if vs else None
            x1, x2 = sk.new_crossing(sign), sk.new_crossing(sign)
            other = "o" if first == "u" else "u"
            sk.insert_before(cid, anchor, [sk.new_visit(x1, first), sk.new_visit(x2, other)])
            mv = [sk.new_visit(x1, other), sk.new_visit(x2, first)]
            if reverse:
                mv.reverse()
            sk.order.append(name)
            sk.role[name] = MARKED
            sk.framing[name] = None
            sk.visits[name] = mv
            if cid in sk.passages:
                sk.passages[cid].append([name, sign, mv[0].uid])
            out = sk.to_diagram()
            if Faces(out).is_planar() and linking_number(out, cid, name) == sign:
                return require_valid(out)
    raise DiagramError("no planar meridian clasp found")


def akbulut_cork(meridian=True, side="left"):
    """The Akbulut cork: dotted ``j``, 0-framed ``h`` with lk = 1, three
    passages of ``h`` through the disk of ``j``, and (optionally) the
    marked meridian ``mu`` of ``j``.

    Both components are crossing-free, so disk passages are recorded for
    ``h`` too and the roles can be swapped.
    """
    d = meander_diagram(_CORK_ORDER, _CORK_LAYERS)
    d = replace(d, passages={"j": tuple(disk_passages(d, "j", side)),
                             "h": tuple(disk_passages(d, "h", side))},
                name="akbulut-cork")
    if meridian:
        d = add_meridian(d, "j", "mu")
    return require_valid(d)


def meridian_of(d, marked):
    """The component a marked curve is a meridian of, or None.

    A meridian crosses exactly one other component, in two crossings with
    linking number +-1, and has no self-crossings.
    """
    c = d.component(marked)
    if c.role != MARKED:
        return None
    owner = d.arc_owner()
    partners = []
    for x in d.crossings:
        a, b = owner[x.over_in], owner[x.under_in]
        if marked in (a, b):
            partners.append(b if a == marked else a)
    if len(partners) != 2 or partners[0] != partners[1] or partners[0] == marked:
        return None
    if abs(linking_number(d, marked, partners[0])) != 1:
        return None
    return partners[0]

"""Symmetric doubling of a Mazur manifold and its role-swapped partner."""

from dataclasses import dataclass, field, replace

from ..kirby.diagram import DOTTED, TWO_HANDLE, DiagramError, require_valid
from ..kirby.groups import DEFAULT_BUDGET, pi1_presentation, tietze_simplify
from ..kirby.linking import boundary_surgery, linking_number
from ..kirby.moves import boundary_det, detect_cancel_and_reduce, role_swap
from ..kirby.planar import Faces, disk_passages
from ..kirby.sketch import Sketch
from .family import LinearForm, region_side
from .library import meridian_of
from .symmetry import (ROTATION, apply_symmetry, disjoint_union, relabel, rotate_mirror,
                       symmetry_between)


@dataclass(frozen=True)
class ReasonablyNiceCertificate:
    """Assumption that the meridian of the dotted circle of ``base`` is not
    slice in the Mazur manifold; it is cited, never computed."""
    base: str
    meridian: str
    assumption: str = "the meridian of the dotted circle bounds no smoothly embedded disk"
    citation: str = ""

    def to_dict(self):
        return {"base": self.base, "meridian": self.meridian,
                "assumption": self.assumption, "citation": self.citation}

    @classmethod
    def from_dict(cls, data):
        return cls(data["base"], data["meridian"], data.get("assumption", cls.assumption),
                   data.get("citation", ""))


@dataclass(frozen=True)
class Clasp:
    """``twists`` full twists between a 2-handle arc and its mirror image
    across the axis; with ``twists = +-1`` the two handles clasp once."""
    arc: int
    twists: object = 1


@dataclass(frozen=True)
class PairedTwist:
    """``twists`` full twists between two 2-handle arcs on one side, and the
    same box between their images on the other."""
    arc1: int
    arc2: int
    twists: object = 1


@dataclass(frozen=True)
class TangleModification:
    """Symmetric change of the linking between the 2-handles of the two
    copies.  Integer twist counts are inserted as crossings; linear forms
    such as ``"n"`` become twist regions of a family template."""
    entries: tuple = field(default_factory=tuple)

    def to_dict(self):
        out = []
        for e in self.entries:
            if isinstance(e, Clasp):
                out.append({"clasp": e.arc, "twists": e.twists})
            else:
                out.append({"twist": [e.arc1, e.arc2], "twists": e.twists})
        return out

    @classmethod
    def from_dict(cls, data):
        entries = []
        for e in data:
            if "clasp" in e:
                entries.append(Clasp(int(e["clasp"]), e.get("twists", 1)))
            else:
                a, b = e["twist"]
                entries.append(PairedTwist(int(a), int(b), e.get("twists", 1)))
        return cls(tuple(entries))


def _mazur_pair(c):
    dotted = [x.id for x in c.components if x.role == DOTTED]
    framed = [x.id for x in c.components if x.role == TWO_HANDLE]
    if len(dotted) != 1 or len(framed) != 1:
        raise DiagramError("base diagram must have one dotted circle and one 2-handle")
    j, h = dotted[0], framed[0]
    if c.component(h).framing != 0 or abs(linking_number(c, j, h)) != 1:
        raise DiagramError("base 2-handle must be 0-framed with linking number one")
    if not detect_cancel_and_reduce(c).is_mazur_type:
        raise DiagramError("base diagram is not Mazur-type")
    return j, h


def _orientation(faces, a, b):
    """Twist-box orientation of two arcs across a shared face."""
    la, ra = faces.sides(a)
    lb, rb = faces.sides(b)
    if la is None or lb is None or faces.piece[a] != faces.piece[b]:
        return "parallel"
    if la == lb or ra == rb:
        return "antiparallel"
    return "parallel"


def _matches(found, recorded):
    key = lambda p: (p.component, p.sign)
    return sorted(map(key, found)) == sorted(map(key, recorded))


def _refresh_passages(w, left_ids, suffix):
    """Re-read the passages of crossing-free circles from the diagram so
    that every passage sits on the arc where its strand leaves the disk.
    The disk of a right-hand circle is the mirror image of its partner's."""
    passages = dict(w.passages)
    for cid in left_ids:
        if cid not in passages:
            continue
        for side, other in (("left", "right"), ("right", "left")):
            try:
                mine = disk_passages(w, cid, side)
                theirs = disk_passages(w, cid + suffix, other)
            except DiagramError:
                break
            if _matches(mine, passages[cid]) and _matches(theirs, passages[cid + suffix]):
                # own-side strands first so that the lists correspond under the swap
                passages[cid] = tuple(sorted(mine, key=lambda p: p.component.endswith(suffix)))
                passages[cid + suffix] = tuple(
                    sorted(theirs, key=lambda p: not p.component.endswith(suffix)))
                break
    return require_valid(replace(w, passages=passages))


def check_contractible(d, budget=DEFAULT_BUDGET):
    """|det| = 1 and a Tietze-trivial pi_1; returns (ok, details)."""
    det = boundary_det(d)
    tz = tietze_simplify(pi1_presentation(d), budget)
    return det == 1 and tz.trivial, {"det": det, "tietze": tz.status, "steps": tz.steps}


def symmetric_double(c, cert=None, mod=None, suffix="'"):
    """Double a Mazur diagram across a vertical axis.

    The right copy is the rotated left copy with ids suffixed by
    ``suffix``; ``mod`` inserts symmetric twists between the 2-handles.
    Returns ``(W, F)`` with ``F`` the order-2 symmetry exchanging the
    copies.  Raises if the result fails the contractibility checks.
    """
    require_valid(c)
    j, h = _mazur_pair(c)
    if cert is not None and meridian_of(c, cert.meridian) != j:
        raise DiagramError(f"{cert.meridian} is not a marked meridian of {j}")
    mod = mod or TangleModification()
    owner = c.arc_owner()
    for e in mod.entries:
        arcs = (e.arc,) if isinstance(e, Clasp) else (e.arc1, e.arc2)
        for a in arcs:
            if a not in owner:
                raise DiagramError(f"unknown arc {a}")
            if c.component(owner[a]).role != TWO_HANDLE:
                raise DiagramError(f"arc {a} belongs to {owner[a]}; modifications may only "
                                   "touch 2-handles, never a 1-handle or its disk")

    offset = max(a for x in c.components for a in x.arcs) + 1
    rotated, _ = rotate_mirror(c, ROTATION)
    right = relabel(rotated, offset, suffix)
    u = disjoint_union(c, right, f"double({c.name})" if c.name else "double")
    faces = Faces(u)
    u_owner = u.arc_owner()
    sk = Sketch.from_diagram(u)

    def end_uid(arc):
        cid = u_owner[arc]
        vs = sk.visits[cid]
        return cid, (vs[u.component(cid).arcs.index(arc)].uid if vs else None)

    plan = []
    for k, e in enumerate(mod.entries, 1):
        if isinstance(e, Clasp):
            pairs = [(e.arc, e.arc + offset, f"c{k}")]
        else:
            pairs = [(e.arc1, e.arc2, f"t{k}"), (e.arc1 + offset, e.arc2 + offset, f"t{k}{suffix}")]
        for a, b, rid in pairs:
            plan.append((end_uid(a), end_uid(b), rid, e.twists, region_side(faces, a, b),
                         _orientation(faces, a, b)))
    for (ca, ua), (cb, ub), rid, twists, side, orient in plan:
        if isinstance(twists, int):
            sk.add_twists(ca, ua, cb, ub, twists, side, orient == "parallel")
        else:
            sk.regions[rid] = {"anchors": [(ca, ua), (cb, ub)],
                               "parameter": str(LinearForm.parse(twists)),
                               "orientation": orient}
    w = sk.to_diagram()
    rep_ok = Faces(w).is_planar()
    if not rep_ok:
        raise DiagramError("modification cannot be drawn without extra crossings")
    require_valid(w)

    comp_map = {}
    for x in c.components:
        comp_map[x.id] = x.id + suffix
        comp_map[x.id + suffix] = x.id
    w = _refresh_passages(w, [x.id for x in c.components], suffix)
    f = symmetry_between(ROTATION, comp_map, w, w)
    if apply_symmetry(f, w) != w:
        raise DiagramError("modification is not symmetric under the rotation")
    ok, info = check_contractible(w)
    if not ok:
        raise RuntimeError(f"doubled diagram failed the contractibility checks: {info}")
    return w, f


def partner_pair(w, suffix="'"):
    """(dotted, framed) ids of the right-hand copy of a double."""
    dotted = [c.id for c in w.components if c.role == DOTTED and c.id.endswith(suffix)]
    framed = [c.id for c in w.components
              if c.role == TWO_HANDLE and c.framing == 0 and c.id.endswith(suffix)]
    if len(dotted) != 1 or len(framed) != 1:
        raise DiagramError("cannot identify the right-hand 1-/2-handle pair")
    return dotted[0], framed[0]


def derive_partner(w, pair=None):
    """Swap the roles of the right-hand pair of a double.  Swapping back
    returns the original diagram."""
    if pair is None:
        try:
            pair = partner_pair(w)
        except DiagramError:
            # already a partner: the dotted circle is the former 2-handle
            dotted = [c.id for c in w.components if c.role == TWO_HANDLE and c.id.endswith("'")
                      and c.framing == 0]
            framed = [c.id for c in w.components if c.role == DOTTED and c.id.endswith("'")]
            if len(dotted) != 1 or len(framed) != 1:
                raise
            return role_swap(w, framed[0], dotted[0])
    out = role_swap(w, *pair)
    if boundary_surgery(out) != boundary_surgery(w):
        raise AssertionError("role swap changed the boundary")
    ok, info = check_contractible(out)
    if not ok:
        raise RuntimeError(f"partner failed the contractibility checks: {info}")
    return out

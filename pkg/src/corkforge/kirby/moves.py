"""Kirby moves on handle diagrams: role swaps, handle slides, erasing
components and cancelling 1-/2-handle pairs."""

from dataclasses import dataclass, field

from .diagram import (DOTTED, MARKED, TWO_HANDLE, DiagramError, require_valid,
                      validate_diagram)
from .groups import pi1_presentation
from .linking import determinant, linking_matrix, linking_number
from .planar import Faces
from .sketch import Sketch


def _check_round(d, cid, dotted_after):
    """Dotted-circle convention for ``cid`` if it were dotted and the
    components in ``dotted_after`` were the other dotted circles."""
    owner = d.arc_owner()
    regions = {r.id for r in d.twist_regions}
    for i, x in enumerate(d.crossings):
        a, b = owner[x.over_in], owner[x.under_in]
        if a == b == cid and x.region not in regions:
            raise DiagramError(f"{cid} crosses itself at crossing {i}; it cannot be dotted")
        if cid in (a, b) and a != b and ({a, b} - {cid}) <= dotted_after:
            raise DiagramError(f"{cid} crosses dotted circle {({a, b} - {cid}).pop()}")


def role_swap(d, dotted_id, framed_id):
    """Exchange a dotted circle with a 0-framed 2-handle.

    The new dotted circle must obey the dotted-circle convention and come
    with disk-passage data.
    """
    require_valid(d)
    dc, fc = d.component(dotted_id), d.component(framed_id)
    if dc.role != DOTTED:
        raise DiagramError(f"{dotted_id} is not dotted")
    if fc.role != TWO_HANDLE:
        raise DiagramError(f"{framed_id} is not a 2-handle")
    if fc.framing != 0:
        raise DiagramError(f"{framed_id} has framing {fc.framing}; only 0-framed 2-handles can be dotted")
    others = {c.id for c in d.components if c.role == DOTTED and c.id != dotted_id}
    _check_round(d, framed_id, others)
    if framed_id not in d.passages:
        raise DiagramError(f"{framed_id} has no disk-passage data")
    out = d.with_roles(**{dotted_id: (TWO_HANDLE, 0), framed_id: (DOTTED, None)})
    require_valid(out)
    return out


@dataclass(frozen=True)
class BandSpec:
    """Band for a handle slide.

    The band runs from arc ``slider_arc`` to the framed push-off of arc
    ``over_arc``.  ``sign`` is +1 to add the push-off with its orientation
    and -1 to subtract it.  ``crossings`` is the face path of the band: the
    ``(arc, layer)`` pairs of the strands it crosses in order, with ``layer``
    'o' when the band passes over the strand.  ``slider_position`` and
    ``over_position`` say how many passages anchored on the respective arc
    lie before the band (``None``: all of them).
    """
    slider_arc: int
    over_arc: int
    sign: int = 1
    slider_position: int = None
    over_position: int = None
    crossings: tuple = field(default_factory=tuple)


def _uid_of_arc(d, sk, arc):
    """Sketch anchor (component, uid) of a diagram arc."""
    owner = d.arc_owner()
    if arc not in owner:
        raise DiagramError(f"unknown arc {arc}")
    cid = owner[arc]
    comp = d.component(cid)
    vs = sk.visits[cid]
    if not vs:
        return cid, None
    return cid, vs[comp.arcs.index(arc)].uid


def _band_route(faces, band):
    """Faces met by the band.

    Returns ``(start_face, [(arc, entering_face)], end_face)``; faces may be
    ``None`` where the adjacent strand is a crossingless loop.
    """
    def compatible(f, g):
        if f is None or g is None or f == g:
            return True
        return faces.face_piece[f] != faces.face_piece[g]

    for start in faces.sides(band.slider_arc):
        here, steps, ok = start, [], True
        for arc, _ in band.crossings:
            l, r = faces.sides(arc)
            if compatible(here, l):
                steps.append((arc, l))
                here = r
            elif compatible(here, r):
                steps.append((arc, r))
                here = l
            else:
                ok = False
                break
        if ok and any(compatible(here, f) for f in faces.sides(band.over_arc)):
            return start, steps, here
    raise DiagramError("band is not an embedded face path from the slider to the other handle")


def handle_slide(d, slider, over, band, check=True):
    """Slide 2-handle (or marked curve) ``slider`` over 2-handle ``over``.

    The slider is band-summed with a framed push-off of ``over``.  The
    push-off lies on the side of ``over`` where the band arrives; if the
    requested sign is not the coherent one for the planar band, the band
    gets a half twist.
    """
    require_valid(d)
    s, o = d.component(slider), d.component(over)
    if slider == over:
        raise DiagramError("cannot slide a handle over itself")
    if o.role != TWO_HANDLE or s.role == DOTTED:
        raise DiagramError("handle slides need a 2-handle (or marked curve) over a 2-handle")
    if band.sign not in (1, -1):
        raise DiagramError("band sign must be +-1")
    owner = d.arc_owner()
    if owner.get(band.slider_arc) != slider:
        raise DiagramError(f"arc {band.slider_arc} is not on {slider}")
    if owner.get(band.over_arc) != over:
        raise DiagramError(f"arc {band.over_arc} is not on {over}")
    seen = set()
    for arc, layer in band.crossings:
        if owner.get(arc) in (None, slider, over) or layer not in ("o", "u") or arc in seen:
            raise DiagramError(f"band cannot cross arc {arc} as specified")
        seen.add(arc)

    faces = Faces(d)
    start, steps, end = _band_route(faces, band)
    ls = None if start is None else start == faces.left[band.slider_arc]
    lb_sides = faces.sides(band.over_arc)
    lb = None if lb_sides[0] is None else (end == lb_sides[0] or end is None)
    # free choices for crossingless strands: make the band untwisted
    if ls is None and lb is None:
        ls, lb = True, band.sign > 0
    elif ls is None:
        ls = lb if band.sign > 0 else not lb
    elif lb is None:
        lb = ls if band.sign > 0 else not ls
    twist = (ls == lb) != (band.sign > 0)

    lk = linking_number(d, slider, over)
    sk = Sketch.from_diagram(d)
    s_anchor = _uid_of_arc(d, sk, band.slider_arc)[1]
    o_anchor = _uid_of_arc(d, sk, band.over_arc)[1]
    crossing_plan = []
    for (arc, layer), (_, entering) in zip(band.crossings, steps):
        cid, uid = _uid_of_arc(d, sk, arc)
        l, _ = faces.sides(arc)
        right_to_left = True if l is None else entering != l
        crossing_plan.append((cid, uid, layer, right_to_left))

    pid = _pushoff(sk, over, 1 if lb else -1)
    p_anchor = None
    if o_anchor is not None and sk.visits[pid]:
        p_anchor = sk._pmap[o_anchor]
        if band.sign < 0:
            # after reversal the parallel arc ends at the visit before
            pv = sk.visits[pid]
            p_anchor = pv[sk.index_of(pid, p_anchor) - 1].uid
    _copy_passages(sk, over, pid)
    if band.sign < 0:
        sk.reverse(pid)
    _splice(sk, slider, pid, s_anchor, p_anchor, band, crossing_plan, ls, twist)

    if s.role == TWO_HANDLE:
        sk.framing[slider] = s.framing + o.framing + 2 * band.sign * lk
    sk.passages.pop(slider, None)  # the band sum is no longer a known unknot
    _cancel_adjacent(sk, slider)
    out = sk.to_diagram()
    rep = validate_diagram(out)
    if not rep.valid or not Faces(out).is_planar():
        raise DiagramError("band is not embeddable as specified")
    if check:
        _check_preserved(d, out, "handle slide")
    return out


def _pushoff(sk, over, side):
    """Add a framed parallel copy of ``over`` on its left (side +1) or right
    (side -1); returns the new component id.

    ``sk._pmap`` maps each visit of ``over`` to the first visit of the
    push-off's copy of it.
    """
    pid = f"{over}~p"
    while pid in sk.role:
        pid += "'"
    vs = list(sk.visits[over])
    count = {}
    for v in vs:
        count[v.xid] = count.get(v.xid, 0) + 1
    groups = []
    before, after = {}, {}  # visits to insert on ``over`` around one of its visits
    extra_other = []  # (component, uid, visit, after?)
    triples = {}
    for v in vs:
        sign = sk.signs[v.xid]
        if count[v.xid] == 1:
            x2 = sk.new_crossing(sign)
            groups.append([sk.new_visit(x2, v.layer)])
            (cid, ov), = [(c, w) for c, w in sk.owner_of(v.xid) if c != over]
            # the other strand meets the push-off after ``over`` iff it
            # crosses ``over`` towards the push-off's side
            r2l = (v.layer == "o") == (sign > 0)
            extra_other.append((cid, ov.uid, sk.new_visit(x2, ov.layer), r2l == (side > 0)))
        else:
            # strand 1 over strand 2; A: P1 over O2, B: O1 over P2, C: P1 over P2
            if v.xid not in triples:
                triples[v.xid] = tuple(sk.new_crossing(sign) for _ in range(3))
            a, b, c = triples[v.xid]
            ss = sign * side
            if v.layer == "o":
                pair = [sk.new_visit(a, "o"), sk.new_visit(c, "o")]
                groups.append(pair if ss < 0 else pair[::-1])
                (after if ss < 0 else before).setdefault(v.uid, []).append(sk.new_visit(b, "o"))
            else:
                pair = [sk.new_visit(b, "u"), sk.new_visit(c, "u")]
                groups.append(pair if ss > 0 else pair[::-1])
                (after if ss > 0 else before).setdefault(v.uid, []).append(sk.new_visit(a, "u"))
    sk.order.append(pid)
    sk.role[pid] = MARKED
    sk.framing[pid] = None
    sk.visits[pid] = [w for g in groups for w in g]
    sk._pmap = {v.uid: g[0].uid for v, g in zip(vs, groups)}
    sk._early = set()  # copies placed just before the visit they shadow
    for cid, uid, visit, is_after in extra_other:
        k = sk.index_of(cid, uid)
        sk.visits[cid].insert(k + 1 if is_after else k, visit)
        if not is_after:
            sk._early.add(visit.uid)
    new = []
    for v in vs:
        new.extend(before.get(v.uid, []))
        new.append(v)
        new.extend(after.get(v.uid, []))
    sk.visits[over] = new
    k = sk.framing[over] - sk.self_writhe(over)
    if k:
        first_o = new[0].uid if new else None
        first_p = sk.visits[pid][0].uid if sk.visits[pid] else None
        sign = 1 if k > 0 else -1
        # in a positive twist the strand on the left passes over first
        lead = "u" if (sign > 0) == (side > 0) else "o"
        _parallel_twists(sk, over, first_o, pid, first_p, k, lead)
    return pid


def _parallel_twists(sk, ca, ua, cb, ub, k, lead):
    """``k`` full twists between parallel strands; strand ``ca`` takes
    layers ``lead``, other, ``lead``, ..."""
    sign = 1 if k > 0 else -1
    other = {"o": "u", "u": "o"}
    xs = [sk.new_crossing(sign) for _ in range(2 * abs(k))]
    seq_a, seq_b = [], []
    for t, x in enumerate(xs):
        la = lead if t % 2 == 0 else other[lead]
        seq_a.append(sk.new_visit(x, la))
        seq_b.append(sk.new_visit(x, other[la]))
    sk.insert_before(ca, ua, seq_a)
    sk.insert_before(cb, ub, seq_b)


def _middle(sk, cid, uid):
    """Insertion index on the arc ending at ``uid`` that lies outside the
    strip between the other handle and its push-off."""
    vs = sk.visits[cid]
    k = sk.index_of(cid, uid)
    if k == 0:
        k = len(vs)
    while k > 0 and vs[k - 1].uid in sk._early:
        k -= 1
    return k


def _copy_passages(sk, over, pid):
    pmap = sk._pmap
    for did, plist in sk.passages.items():
        out = []
        for entry in plist:
            c, sgn, uid = entry
            if c != over:
                out.append(entry)
                continue
            new = [pid, sgn, pmap.get(uid) if uid is not None else None]
            if new[2] is None and sk.visits[pid]:
                new[2] = sk.visits[pid][0].uid
            out.extend([new, entry] if sgn > 0 else [entry, new])
        sk.passages[did] = out


def _splice(sk, slider, pid, s_anchor, p_anchor, band, plan, ls, twist):
    """Band-sum the push-off into the slider.

    ``plan`` lists the strands crossed by the band as
    ``(component, uid, layer, right_to_left)``; ``ls`` tells whether the
    band leaves the slider from its left side.
    """
    svis = sk.visits[slider]
    pvis = sk.visits[pid]
    if pvis and p_anchor is not None:
        j = sk.index_of(pid, p_anchor)
        prot = pvis[j:] + pvis[:j]
    else:
        prot = list(pvis)
    other = {"o": "u", "u": "o"}
    side1, side2 = [], []
    for cid, uid, layer, r2l in plan:
        sign1 = (1 if r2l else -1) * (-1 if layer == "o" else 1)
        y1, y2 = sk.new_crossing(sign1), sk.new_crossing(-sign1)
        side1.append(sk.new_visit(y1, layer))
        side2.insert(0, sk.new_visit(y2, layer))
        # the crossed strand meets the band's left edge first iff it runs
        # from the band's left to its right; edge 1 is the left edge iff ls
        first_is_1 = r2l == ls
        pair = [sk.new_visit(y1, other[layer]), sk.new_visit(y2, other[layer])]
        if uid is None:
            sk.visits[cid].extend(pair if first_is_1 else pair[::-1])
        else:
            k = _middle(sk, cid, uid)
            sk.visits[cid][k:k] = pair if first_is_1 else pair[::-1]
    if twist:
        # half twist at the push-off end; edge 1 passes over
        h = sk.new_crossing(-1 if ls else 1)
        side1.append(sk.new_visit(h, "o"))
        side2.insert(0, sk.new_visit(h, "u"))
    insert = side1 + prot + side2
    if svis and s_anchor is not None:
        g = _middle(sk, slider, s_anchor)
    else:
        g = len(svis)
    new_vis = svis[:g] + insert + svis[g:]
    head = insert[0].uid if insert else None
    tail = svis[g].uid if g < len(svis) else (new_vis[0].uid if new_vis else None)
    p_head = prot[0].uid if prot else None
    for did, plist in sk.passages.items():
        s_seen = p_seen = 0
        for entry in plist:
            c, sgn, uid = entry
            if c == slider and uid == s_anchor:
                before = band.slider_position is None or s_seen < band.slider_position
                s_seen += 1
                entry[2] = head if before else tail
            elif c == pid:
                if uid == p_head:
                    before = band.over_position is None or p_seen < band.over_position
                    p_seen += 1
                    entry[2] = tail if (before == (band.sign > 0)) else head
                entry[0] = slider
    sk.visits[slider] = new_vis
    del sk.visits[pid]
    sk.order.remove(pid)
    sk.role.pop(pid)
    sk.framing.pop(pid)
    for r in sk.regions.values():
        r["anchors"] = [(slider if c == pid else c, u) for c, u in r["anchors"]]


def _cancel_adjacent(sk, cid):
    """Remove adjacent opposite passages of ``cid`` through one disk that lie
    on the same arc: such a pair is undone by an isotopy."""
    for did, plist in sk.passages.items():
        changed = True
        while changed:
            changed = False
            for k in range(len(plist) - 1):
                a, b = plist[k], plist[k + 1]
                if a[0] == b[0] == cid and a[1] == -b[1] and a[2] == b[2]:
                    del plist[k:k + 2]
                    changed = True
                    break


def erase_component(d, cid):
    """Delete a component from the diagram (e.g. erase a dotted circle)."""
    require_valid(d)
    d.component(cid)
    sk = Sketch.from_diagram(d)
    sk.erase(cid)
    return sk.to_diagram()


def boundary_det(d):
    return abs(determinant(linking_matrix(d)))


def _check_preserved(before, after, what):
    if boundary_det(before) != boundary_det(after):
        raise AssertionError(f"{what} changed |det| of the linking matrix")
    if pi1_presentation(before).abelianization() != pi1_presentation(after).abelianization():
        raise AssertionError(f"{what} changed the abelianization of pi_1")


@dataclass
class CancellationResult:
    diagram: object
    cancelled: list
    blocked: list = field(default_factory=list)

    @property
    def is_mazur_type(self):
        roles = [c.role for c in self.diagram.components]
        return roles.count(DOTTED) == 1 and roles.count(TWO_HANDLE) == 1


def find_cancelling_pair(d, skip=()):
    """First (dotted, 2-handle) pair not in ``skip`` where the 2-handle
    crosses the disk of the dotted circle exactly once."""
    for u in sorted(c.id for c in d.components if c.role == DOTTED):
        plist = d.passages.get(u, ())
        counts = {}
        for p in plist:
            counts[p.component] = counts.get(p.component, 0) + 1
        for v in sorted(counts):
            if counts[v] == 1 and d.component(v).role == TWO_HANDLE and (u, v) not in skip:
                return u, v
    return None


def cancel_pair(d, u, v):
    """Cancel dotted circle ``u`` against 2-handle ``v``.

    Every other curve crossing the disk of ``u`` is first slid over ``v``
    so that it no longer passes the 1-handle; then ``u`` and ``v`` are
    erased.
    """
    while True:
        others = [p for p in d.passages.get(u, ()) if p.component != v]
        if not others:
            break
        d = _slide_off(d, u, v, others)
    sk = Sketch.from_diagram(d)
    sk.erase(u)
    sk.erase(v)
    return sk.to_diagram()


def _slide_off(d, u, v, others):
    """Slide the first curve in ``others`` that admits a band over ``v``
    so that one of its passages through ``u`` cancels."""
    (pv,) = [p for p in d.passages[u] if p.component == v]
    over_arc = pv.arc if pv.arc is not None else d.component(v).arcs[0]
    failure = None
    for other in others:
        w = other.component
        if d.component(w).role == DOTTED:
            raise DiagramError(f"dotted circle {w} passes through {u}")
        sign = -other.sign * pv.sign
        arc = other.arc if other.arc is not None else d.component(w).arcs[0]
        before = sum(1 for p in d.passages[u][:d.passages[u].index(other)]
                     if p.component == w and p.arc == arc)
        for search in (False, True):
            try:
                crossings = _disk_band(d, u, w, v, arc, over_arc) if search else ()
                out = handle_slide(d, w, v, BandSpec(arc, over_arc, sign, before + 1,
                                                     crossings=crossings), check=False)
            except DiagramError as exc:
                failure = exc
                continue
            return _drop_passage_pair(out, u, w)
    raise failure


def _height_layer(d, owner, u, arc):
    """Layer for a band at the level of the disk of ``u`` crossing ``arc``:
    under the strand if it last entered the disk region over ``u``."""
    comp = d.component(owner[arc])
    at_end = {}
    for x in d.crossings:
        at_end[x.over_in] = (x, "o")
        at_end[x.under_in] = (x, "u")
    k = comp.arcs.index(arc)
    for step in range(1, len(comp.arcs) + 1):
        prev = comp.arcs[(k - step) % len(comp.arcs)]
        hit = at_end.get(prev)
        if hit is None:
            continue
        x, layer = hit
        other = x.under_in if layer == "o" else x.over_in
        if owner[other] == u:
            return "u" if layer == "o" else "o"
    return "o"


def _disk_band(d, u, slider, over, slider_arc, over_arc):
    """Shortest face path from ``slider_arc`` to ``over_arc`` that avoids
    ``u``, ``slider`` and ``over``; used when the two arcs share no face."""
    from collections import deque
    faces = Faces(d)
    owner = d.arc_owner()
    blocked = {u, slider, over}
    edges = {}
    for arc, cid in owner.items():
        if cid in blocked:
            continue
        l, r = faces.sides(arc)
        if l is None or l == r:
            continue
        edges.setdefault(l, []).append((arc, r))
        edges.setdefault(r, []).append((arc, l))
    goal = set(f for f in faces.sides(over_arc) if f is not None)
    starts = [f for f in faces.sides(slider_arc) if f is not None]
    prev = {f: None for f in starts}
    queue = deque(starts)
    while queue:
        f = queue.popleft()
        if f in goal:
            path = []
            while prev[f] is not None:
                f, arc = prev[f]
                path.append(arc)
            return tuple((a, _height_layer(d, owner, u, a)) for a in reversed(path))
        for arc, g in sorted(edges.get(f, ())):
            if g not in prev:
                prev[g] = (f, arc)
                queue.append(g)
    raise DiagramError(f"no band from {slider} to {over} avoiding {u}")


def _drop_passage_pair(d, u, w):
    """After sliding ``w`` off ``u`` its passages through ``u`` sum to the
    algebraic remainder; keep only a minimal list."""
    from dataclasses import replace
    plist = list(d.passages.get(u, ()))
    mine = [p for p in plist if p.component == w]
    total = sum(p.sign for p in mine)
    keep, seen = [], 0
    for p in plist:
        if p.component != w:
            keep.append(p)
        elif seen < abs(total) and p.sign == (1 if total > 0 else -1):
            keep.append(p)
            seen += 1
    passages = dict(d.passages)
    passages[u] = tuple(keep)
    return replace(d, passages=passages)


def detect_cancel_and_reduce(d):
    """Repeatedly cancel 1-/2-handle pairs.

    Returns a :class:`CancellationResult`; ``|det|`` of the linking matrix
    and the abelianization of pi_1 are checked to be unchanged.  A pair is
    left alone when no band is found to slide the other curves off it; the
    skipped pairs are listed in ``blocked``.
    """
    require_valid(d)
    start = d
    cancelled, blocked = [], []
    while True:
        pair = find_cancelling_pair(d, blocked)
        if pair is None:
            break
        try:
            d = cancel_pair(d, *pair)
        except DiagramError:
            blocked.append(pair)
            continue
        cancelled.append(pair)
        blocked = []
    if cancelled:
        _check_preserved(start, d, "cancellation")
    return CancellationResult(d, cancelled, blocked)

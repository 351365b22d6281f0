"""Mutable working copy of a handle diagram used by the diagram moves.

Components are kept as cyclic lists of crossing visits, which makes
splicing (twists, band sums, erasures) a list operation.  Arc ids are
recomputed when converting back to a :class:`HandleDiagram`.  A passage or
twist region is anchored to the visit at the *end* of its arc, so inserting
crossings into an arc keeps the anchor on the final sub-arc.
"""

import itertools
from dataclasses import dataclass

from .diagram import (DOTTED, Component, Crossing, DiagramError, HandleDiagram,
                      Passage, TwistRegion)


@dataclass
class Visit:
    xid: int
    layer: str  # 'o' or 'u'
    uid: int


class Sketch:
    def __init__(self):
        self.order = []
        self.role = {}
        self.framing = {}
        self.visits = {}
        self.signs = {}
        self.xregion = {}
        self.passages = {}
        self.regions = {}
        self.name = ""
        self._uids = itertools.count()
        self._xids = itertools.count()

    # -- conversion -------------------------------------------------------

    @classmethod
    def from_diagram(cls, d):
        sk = cls()
        sk.name = d.name
        ends = {}
        for i, x in enumerate(d.crossings):
            ends[x.over_in] = (i, "o")
            ends[x.under_in] = (i, "u")
        xid_map = {}
        for i, x in enumerate(d.crossings):
            xid_map[i] = next(sk._xids)
            sk.signs[xid_map[i]] = x.sign
            sk.xregion[xid_map[i]] = x.region
        anchor = {}
        for c in d.components:
            sk.order.append(c.id)
            sk.role[c.id] = c.role
            sk.framing[c.id] = c.framing
            vs = []
            for a in c.arcs:
                if a in ends:
                    i, layer = ends[a]
                    v = Visit(xid_map[i], layer, next(sk._uids))
                    vs.append(v)
                    anchor[a] = v.uid
                else:
                    anchor[a] = None
            sk.visits[c.id] = vs
        for did, plist in d.passages.items():
            sk.passages[did] = [[p.component, p.sign,
                                 anchor.get(p.arc) if p.arc is not None else _first_uid(sk, p.component)]
                                for p in plist]
        for r in d.twist_regions:
            owner = d.arc_owner()
            sk.regions[r.id] = {"anchors": [(owner[a], anchor[a]) for a in r.arcs],
                                "parameter": r.parameter,
                                "orientation": r.orientation, "side": r.side}
        return sk

    def to_diagram(self):
        arc_of = {}  # uid -> arc id ending at that visit
        comps = []
        counter = itertools.count()
        slots = {}
        for cid in self.order:
            vs = self.visits[cid]
            if not vs:
                a = next(counter)
                comps.append(Component(cid, self.role[cid], (a,), self.framing[cid]))
                arc_of[("loop", cid)] = a
                continue
            arcs = [next(counter) for _ in vs]
            for k, v in enumerate(vs):
                arc_of[v.uid] = arcs[k]
                out_arc = arcs[(k + 1) % len(vs)]
                slot = slots.setdefault(v.xid, {})
                if v.layer in slot:
                    raise DiagramError(f"crossing {v.xid} visited twice on the {v.layer} layer")
                slot[v.layer] = (arcs[k], out_arc)
            comps.append(Component(cid, self.role[cid], tuple(arcs), self.framing[cid]))
        crossings = []
        for xid in sorted(slots):
            slot = slots[xid]
            if set(slot) != {"o", "u"}:
                raise DiagramError(f"crossing {xid} lacks an over or under strand")
            crossings.append(Crossing(slot["o"][0], slot["o"][1], slot["u"][0],
                                      slot["u"][1], self.signs[xid], self.xregion.get(xid)))

        def arc_for(cid, uid):
            if uid is None or not self.visits[cid]:
                return arc_of[("loop", cid)]
            return arc_of[uid]

        passages = {}
        for did, plist in self.passages.items():
            if did not in self.role:
                continue
            passages[did] = tuple(Passage(c, s, arc_for(c, u)) for c, s, u in plist)
        regions = []
        for rid, r in sorted(self.regions.items()):
            arcs = tuple(arc_for(c, u) for c, u in r["anchors"])
            regions.append(TwistRegion(rid, arcs, r["parameter"], r["orientation"],
                                       r.get("side")))
        return HandleDiagram(tuple(comps), tuple(crossings), passages,
                             tuple(regions), self.name)

    # -- primitive edits --------------------------------------------------

    def new_crossing(self, sign, region=None):
        xid = next(self._xids)
        self.signs[xid] = sign
        self.xregion[xid] = region
        return xid

    def new_visit(self, xid, layer):
        return Visit(xid, layer, next(self._uids))

    def index_of(self, cid, uid):
        for k, v in enumerate(self.visits[cid]):
            if v.uid == uid:
                return k
        raise DiagramError(f"visit {uid} not on component {cid}")

    def insert_before(self, cid, uid, new):
        """Insert visits into the arc of ``cid`` ending at visit ``uid``."""
        vs = self.visits[cid]
        if uid is None or not vs:
            vs.extend(new)
            return
        k = self.index_of(cid, uid)
        vs[k:k] = new

    def owner_of(self, xid):
        return [(cid, v) for cid in self.order for v in self.visits[cid] if v.xid == xid]

    def remove_crossing(self, xid):
        for cid in self.order:
            vs = self.visits[cid]
            for k in [k for k, v in enumerate(vs) if v.xid == xid][::-1]:
                removed = vs.pop(k)
                succ = vs[k % len(vs)].uid if vs else None
                self._reanchor(cid, removed.uid, succ)
        self.signs.pop(xid, None)
        self.xregion.pop(xid, None)

    def _reanchor(self, cid, old, new):
        for plist in self.passages.values():
            for p in plist:
                if p[0] == cid and p[2] == old:
                    p[2] = new
        for r in self.regions.values():
            r["anchors"] = [(c, new if (c == cid and u == old) else u)
                            for c, u in r["anchors"]]

    def erase(self, cid):
        """Delete a component together with all its crossings."""
        for xid in {v.xid for v in self.visits[cid]}:
            self.remove_crossing(xid)
        self.order.remove(cid)
        for table in (self.role, self.framing, self.visits):
            table.pop(cid, None)
        self.passages.pop(cid, None)
        for did in list(self.passages):
            self.passages[did] = [p for p in self.passages[did] if p[0] != cid]
        self.regions = {rid: r for rid, r in self.regions.items()
                        if all(c != cid for c, _ in r["anchors"])}

    def reverse(self, cid):
        """Reverse the orientation of a component."""
        vs = self.visits[cid]
        if vs:
            # arc ending at vs[k] becomes the arc ending at vs[k-1]
            remap = {vs[k].uid: vs[k - 1].uid for k in range(len(vs))}
            for plist in self.passages.values():
                for p in plist:
                    if p[0] == cid:
                        p[2] = remap[p[2]]
            for r in self.regions.values():
                r["anchors"] = [(c, remap[u] if c == cid else u) for c, u in r["anchors"]]
            vs.reverse()
        own = {v.xid for v in vs}
        for xid in own:
            owners = {c for c, _ in self.owner_of(xid)}
            if owners != {cid}:
                self.signs[xid] = -self.signs[xid]
        for did, plist in self.passages.items():
            for p in plist:
                if p[0] == cid or did == cid:
                    p[1] = -p[1]

    def self_writhe(self, cid):
        seen = {}
        for v in self.visits[cid]:
            seen[v.xid] = seen.get(v.xid, 0) + 1
        return sum(self.signs[x] for x, n in seen.items() if n == 2)

    def add_twists(self, ca, ua, cb, ub, full_twists, side, parallel=True, region=None):
        """Insert ``full_twists`` full twists between two arcs.

        The arcs are those of ``ca`` and ``cb`` ending at visits ``ua`` and
        ``ub``; ``side`` is +1 when the second strand lies on the left of
        the first.  All ``2 * |full_twists|`` crossings get the sign of
        ``full_twists``, so negating it mirrors the inserted crossings.
        """
        if full_twists == 0:
            return []
        if ca == cb and ua == ub:
            raise DiagramError("twist region needs two distinct arcs")
        sign = 1 if full_twists > 0 else -1
        # reversing the second strand turns an antiparallel twist into a
        # parallel one of the opposite crossing sign
        psign = sign if parallel else -sign
        lead = "u" if (psign > 0) == (side > 0) else "o"
        other = {"o": "u", "u": "o"}
        xs = [self.new_crossing(sign, region) for _ in range(2 * abs(full_twists))]
        seq_a, seq_b = [], []
        for t, x in enumerate(xs):
            la = lead if t % 2 == 0 else other[lead]
            seq_a.append(self.new_visit(x, la))
            seq_b.append(self.new_visit(x, other[la]))
        if not parallel:
            seq_b.reverse()
        self.insert_before(ca, ua, seq_a)
        self.insert_before(cb, ub, seq_b)
        if ca != cb:
            # each full twist makes either strand cross the other's disk once
            for c, own, seq in ((cb, ca, seq_b), (ca, cb, seq_a)):
                if own in self.passages:
                    self.passages[own].extend([c, sign, seq[2 * t].uid]
                                              for t in range(abs(full_twists)))
        return xs


def _first_uid(sk, cid):
    vs = sk.visits.get(cid)
    return vs[0].uid if vs else None


def build_diagram(components, signs, passages=None, regions=None, name=""):
    """Build a diagram from Gauss-style visit sequences.

    ``components`` is a list of ``(id, role, framing, visits)`` where
    ``visits`` is the cyclic list of ``(crossing_label, 'o'|'u')`` met when
    traversing the component.  ``signs`` maps crossing labels to +-1.
    ``passages`` maps a component id to a list of
    ``(passing_component, sign, visit_index)``: the passage lies on the arc of
    the passing component that ends at its visit with that index (``None`` for
    crossingless components).  ``regions`` maps a region id to
    ``((comp, visit_index), (comp, visit_index), parameter, orientation)``.
    """
    sk = Sketch()
    sk.name = name
    xid = {}
    for label in signs:
        xid[label] = sk.new_crossing(signs[label])
    uids = {}
    for cid, role, framing, visits in components:
        sk.order.append(cid)
        sk.role[cid] = role
        sk.framing[cid] = framing
        vs = [sk.new_visit(xid[label], layer) for label, layer in visits]
        sk.visits[cid] = vs
        uids[cid] = [v.uid for v in vs]
    for did, plist in (passages or {}).items():
        sk.passages[did] = [[c, s, None if k is None else uids[c][k]] for c, s, k in plist]
    for rid, (a, b, param, orient) in (regions or {}).items():
        sk.regions[rid] = {"anchors": [(a[0], None if a[1] is None else uids[a[0]][a[1]]),
                                       (b[0], None if b[1] is None else uids[b[0]][b[1]])],
                           "parameter": param, "orientation": orient}
    return sk.to_diagram()


def dotted_ids(sk):
    return [c for c in sk.order if sk.role[c] == DOTTED]

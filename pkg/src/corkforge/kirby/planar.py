"""Faces of a planar link diagram.

At a crossing the four half-edges are, counterclockwise from the outgoing
over strand: for a positive crossing over_out, under_out, over_in,
under_in; for a negative one over_out, under_in, over_in, under_out.
Faces are traced keeping the face on the left.
"""

from .diagram import DiagramError

_CCW = {1: ("oo", "uo", "oi", "ui"), -1: ("oo", "ui", "oi", "uo")}


def _slot_arc(x, slot):
    return {"oo": x.over_out, "oi": x.over_in, "uo": x.under_out, "ui": x.under_in}[slot]


class Faces:
    """Face structure of a diagram.

    ``left[arc]``/``right[arc]`` give face ids on either side of an arc
    (w.r.t. its orientation).  Crossingless loops get ``None`` on both sides:
    they are split from everything and can be moved next to any face.
    ``piece[arc]`` numbers the connected pieces of the projection.
    """

    def __init__(self, d):
        self.diagram = d
        head, tail = {}, {}
        for i, x in enumerate(d.crossings):
            head[x.over_in] = (i, "oi")
            head[x.under_in] = (i, "ui")
            tail[x.over_out] = (i, "oo")
            tail[x.under_out] = (i, "uo")
        self.left, self.right = {}, {}
        # a dart is (arc, +1) forward or (arc, -1) backward
        face_of = {}
        nfaces = 0
        darts = [(a, e) for c in d.components for a in c.arcs if a in head for e in (1, -1)]
        for start in darts:
            if start in face_of:
                continue
            dart = start
            while dart not in face_of:
                face_of[dart] = nfaces
                arc, e = dart
                i, slot = head[arc] if e > 0 else tail[arc]
                x = d.crossings[i]
                order = _CCW[x.sign]
                k = order.index(slot)
                nxt = order[(k - 1) % 4]  # clockwise neighbour keeps the face on the left
                narc = _slot_arc(x, nxt)
                dart = (narc, 1 if nxt in ("oo", "uo") else -1)
            if dart != start:
                raise DiagramError("face tracing did not close up")
            nfaces += 1
        self.count = nfaces
        for (arc, e), f in face_of.items():
            (self.left if e > 0 else self.right)[arc] = f
        for c in d.components:
            for a in c.arcs:
                if a not in head:
                    self.left[a] = self.right[a] = None
        self.piece = self._pieces(d)
        self.face_piece = {}
        for a, f in self.left.items():
            if f is not None:
                self.face_piece[f] = self.piece[a]
                self.face_piece[self.right[a]] = self.piece[a]

    @staticmethod
    def _pieces(d):
        parent = {a: a for c in d.components for a in c.arcs}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in d.crossings:
            arcs = x.arcs()
            for a in arcs[1:]:
                ra, rb = find(arcs[0]), find(a)
                if ra != rb:
                    parent[rb] = ra
        for c in d.components:
            for a in c.arcs[1:]:
                ra, rb = find(c.arcs[0]), find(a)
                if ra != rb:
                    parent[rb] = ra
        roots = sorted({find(a) for a in parent})
        index = {r: k for k, r in enumerate(roots)}
        return {a: index[find(a)] for a in parent}

    def is_planar(self):
        """Euler check per connected piece: F = V + 2."""
        vs, fs = {}, {}
        for x in self.diagram.crossings:
            p = self.piece[x.over_in]
            vs[p] = vs.get(p, 0) + 1
        for f, p in self.face_piece.items():
            fs[p] = fs.get(p, 0) + 1
        return all(fs.get(p, 0) == v + 2 for p, v in vs.items())

    def sides(self, arc):
        return self.left[arc], self.right[arc]


def is_planar(d):
    return Faces(d).is_planar()


def disk_passages(d, cid, side="left"):
    """Disk passages through a crossing-free circle read off the diagram.

    The circle bounds a disk on either side in the 2-sphere; ``side`` picks
    the one on its left or right.  A strand crossing into that side and
    leaving it at a different layer pierces the disk once.  Returns a list
    of ``Passage`` in component order, each anchored on the arc that ends
    where the strand leaves the disk's side.
    """
    from .diagram import Passage

    owner = d.arc_owner()
    at_end = {}
    for x in d.crossings:
        at_end[x.over_in] = (x, "o")
        at_end[x.under_in] = (x, "u")
    if any(owner[x.over_in] == owner[x.under_in] == cid for x in d.crossings):
        raise DiagramError(f"{cid} crosses itself")
    want_left = side == "left"
    out = []
    for c in d.components:
        if c.id == cid:
            continue
        events = []  # (index of arc ending at the crossing, layer, enters left?)
        for k, a in enumerate(c.arcs):
            hit = at_end.get(a)
            if hit is None:
                continue
            x, layer = hit
            other = x.under_in if layer == "o" else x.over_in
            if owner[other] != cid:
                continue
            circle_over = layer == "u"
            r2l = (circle_over and x.sign > 0) or (not circle_over and x.sign < 0)
            events.append((k, layer, r2l))
        n = len(events)
        for i in range(n):
            k0, l0, into_left = events[i]
            k1, l1, _ = events[(i + 1) % n]
            if into_left != want_left or l0 == l1:
                continue
            downward = l0 == "o"
            sign = -1 if downward == want_left else 1
            out.append(Passage(c.id, sign, c.arcs[k1]))
    return out

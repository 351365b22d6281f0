"""Combinatorial isomorphisms of ideal triangulations.

An isomorphism sends tetrahedron ``t`` to ``tets[t]`` with vertex map
``perms[t]``, commuting with the gluings.  Since triangulations are
connected, the image of tetrahedron 0 determines the rest; the search runs
over all ``T x 24`` choices and propagates face by face.
"""

import itertools
from dataclasses import dataclass

from .triangulation import perm_compose, perm_inverse, perm_sign, perm_str

PERMS = tuple(itertools.permutations(range(4)))


@dataclass(frozen=True)
class Isomorphism:
    tets: tuple
    perms: tuple

    @property
    def orientation(self):
        """+1 if orientation preserving, -1 if reversing.  Tetrahedra are
        consistently oriented, so every vertex map has the same parity."""
        return perm_sign(self.perms[0])

    def compose(self, other):
        """``self`` after ``other``."""
        tets = tuple(self.tets[other.tets[t]] for t in range(len(self.tets)))
        perms = tuple(perm_compose(self.perms[other.tets[t]], other.perms[t])
                      for t in range(len(self.tets)))
        return Isomorphism(tets, perms)

    def inverse(self):
        n = len(self.tets)
        tets = [0] * n
        perms = [None] * n
        for t in range(n):
            tets[self.tets[t]] = t
            perms[self.tets[t]] = perm_inverse(self.perms[t])
        return Isomorphism(tuple(tets), tuple(perms))

    def is_identity(self):
        return all(self.tets[t] == t and self.perms[t] == (0, 1, 2, 3)
                   for t in range(len(self.tets)))

    def cusp_map(self, src, dst):
        """Cusp permutation induced on vertex classes."""
        a, b = src.cusp_index(), dst.cusp_index()
        out = {}
        for (t, v), c in sorted(a.items()):
            out.setdefault(c, b[(self.tets[t], self.perms[t][v])])
        return tuple(out[c] for c in range(len(out)))

    def to_dict(self):
        return {"tets": list(self.tets), "perms": [perm_str(p) for p in self.perms],
                "orientation": self.orientation}


def _extend(src, dst, t0, p0):
    n = src.num_tetrahedra
    tets = [None] * n
    perms = [None] * n
    used = set()
    tets[0], perms[0] = t0, p0
    used.add(t0)
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            tn, _, glue = src.glued(t, f)
            image_face = perms[t][f]
            dn, _, dglue = dst.glued(tets[t], image_face)
            # vertex map on the neighbour making the square commute
            want = perm_compose(perm_compose(dglue, perms[t]), perm_inverse(glue))
            if tets[tn] is None:
                if dn in used:
                    return None
                tets[tn], perms[tn] = dn, want
                used.add(dn)
                stack.append(tn)
            elif tets[tn] != dn or perms[tn] != want:
                return None
    return Isomorphism(tuple(tets), tuple(perms))


def isomorphisms(src, dst):
    """All combinatorial isomorphisms ``src -> dst``, in search order."""
    if src.num_tetrahedra != dst.num_tetrahedra or src.num_cusps != dst.num_cusps:
        return []
    out = []
    for t0 in range(dst.num_tetrahedra):
        for p0 in PERMS:
            iso = _extend(src, dst, t0, p0)
            if iso is not None:
                out.append(iso)
    return out


@dataclass(frozen=True)
class IsometryGroup:
    """Elements with orientation flags and the multiplication table
    ``table[i][j]`` = index of ``elements[i] . elements[j]``."""
    elements: tuple
    table: tuple

    @property
    def order(self):
        return len(self.elements)

    @property
    def orientation_flags(self):
        return tuple(g.orientation for g in self.elements)

    @property
    def orientation_reversing(self):
        return sum(1 for g in self.elements if g.orientation < 0)

    def to_dict(self, tri=None):
        out = {"order": self.order, "orientation_reversing": self.orientation_reversing,
               "elements": [g.to_dict() for g in self.elements],
               "table": [list(r) for r in self.table]}
        if tri is not None:
            for d, g in zip(out["elements"], self.elements):
                d["cusps"] = list(g.cusp_map(tri, tri))
        return out


class GroupAxiomError(AssertionError):
    pass


def automorphisms(tri):
    """All combinatorial self-isomorphisms, checked to form a group whose
    orientation flags give a homomorphism to +-1."""
    elems = isomorphisms(tri, tri)
    index = {g: i for i, g in enumerate(elems)}
    if not any(g.is_identity() for g in elems):
        raise GroupAxiomError("identity missing")
    table = []
    for g in elems:
        row = []
        for h in elems:
            gh = g.compose(h)
            if gh not in index:
                raise GroupAxiomError("not closed under composition")
            if gh.orientation != g.orientation * h.orientation:
                raise GroupAxiomError("orientation flags are not multiplicative")
            row.append(index[gh])
        table.append(tuple(row))
    for g in elems:
        if g.inverse() not in index:
            raise GroupAxiomError("not closed under inverses")
    return IsometryGroup(tuple(elems), tuple(table))

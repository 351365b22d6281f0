"""Canonicity of a triangulation from interval tilts.

Each cusp cross-section is scaled to area 1.  The corner triangle at vertex
``v`` of a tetrahedron has angles equal to the dihedral angles of the edges
at ``v``, so with scale ``k`` its side in face ``f`` has length
``k sin(angle at edge vf)`` and its circumradius is ``k / 2``.  The tilt of
the face opposite ``v`` is ``R_v - sum_w cos(angle at edge vw) R_w``; a
face of the triangulation is a face of the canonical decomposition when
the tilts from its two sides sum to a negative number.
"""

from mpmath import iv

from .triangulation import EDGE_SHAPE, edge_key

CANONICAL = "canonical"
NOT_CANONICAL = "not_canonical"
INDETERMINATE = "indeterminate"


def _edge_shapes(z):
    one = iv.mpc(1, 0)
    return (z, one / (one - z), (z - one) / z)


def _sin_cos(w):
    r = abs(w)
    return w.imag / r, w.real / r


def corner_scales(tri, shapes):
    """Scale ``k[(t, v)]`` of every corner triangle, cusps at area 1."""
    trig = []
    for z in shapes:
        trig.append([_sin_cos(w) for w in _edge_shapes(z)])

    def sin_at(t, a, b):
        return trig[t][EDGE_SHAPE[edge_key(a, b)]][0]

    k = {}
    for members in tri.vertex_classes():
        root = members[0]
        k[root] = iv.mpf(1)
        stack = [root]
        while stack:
            t, v = stack.pop()
            for f in range(4):
                if f == v:
                    continue
                tn, fn, perm = tri.glued(t, f)
                vn = perm[v]
                if (tn, vn) in k:
                    continue
                k[(tn, vn)] = k[(t, v)] * sin_at(t, v, f) / sin_at(tn, vn, fn)
                stack.append((tn, vn))
        area = iv.mpf(0)
        for t, v in members:
            s = [sin_at(t, v, u) for u in range(4) if u != v]
            area += k[(t, v)] ** 2 * s[0] * s[1] * s[2] / 2
        scale = 1 / iv.sqrt(area)
        for m in members:
            k[m] = k[m] * scale
    return k, trig


def tilts(tri, shapes):
    """``tilt[(t, f)]`` for the face of ``t`` opposite vertex ``f``."""
    k, trig = corner_scales(tri, shapes)
    out = {}
    for t in range(tri.num_tetrahedra):
        for v in range(4):
            acc = k[(t, v)] / 2
            for w in range(4):
                if w != v:
                    acc -= trig[t][EDGE_SHAPE[edge_key(v, w)]][1] * k[(t, w)] / 2
            out[(t, v)] = acc
    return out


def face_tilt_sums(tri, shapes):
    """Tilt sums, one per face pair, keyed by the smaller (tet, face)."""
    tl = tilts(tri, shapes)
    out = {}
    for t in range(tri.num_tetrahedra):
        for f in range(4):
            tn, fn, _ = tri.glued(t, f)
            key = min((t, f), (tn, fn))
            if key not in out:
                out[key] = tl[(t, f)] + tl[(tn, fn)]
    return out


def canonical_verify(tri, shapes, cert):
    """Classify ``tri`` as canonical, not canonical or indeterminate using
    the certified shape boxes.  Returns ``(verdict, sums)`` with the tilt
    sums as ``(lo, hi)`` pairs."""
    if cert is None or not cert.verified:
        raise ValueError("canonical_verify needs a verified certificate")
    if any(s is not None for s in cert.slopes):
        raise ValueError("canonicity is defined for the complete structure")
    boxes = list(cert.intervals)
    if len(boxes) != len(shapes):
        raise ValueError("certificate does not match the shapes")
    sums = face_tilt_sums(tri, boxes)
    ends = {key: (float(x.a), float(x.b)) for key, x in sorted(sums.items())}
    if any(lo > 0 for lo, _ in ends.values()):
        return NOT_CANONICAL, ends
    if all(hi < 0 for _, hi in ends.values()):
        return CANONICAL, ends
    return INDETERMINATE, ends

"""Ideal triangulations with peripheral curves, and the ``hyptri/1`` format.

A gluing sends face ``f`` of tetrahedron ``t`` to face ``perm[f]`` of
tetrahedron ``tet``; ``perm[i]`` is the image of vertex ``i``.  Peripheral
curves are stored as in SnapPea: ``curve[t][v][f]`` is the signed number of
times the curve crosses the side of the cusp triangle at vertex ``v`` of
tetrahedron ``t`` that lies in face ``f`` (positive when entering).

Tetrahedra must be consistently oriented, that is every gluing permutation
is odd; shape parameters are then attached to the edges in the usual way.

Text format::

    hyptri/1
    T
    face k -> tet t face f perm abcd      (4 lines per tetrahedron)
    cusp c meridian
    w0 w1 w2 w3                           (T x 4 rows, row 4t+v, entry f)
    cusp c longitude
    ...

Blank lines and ``#`` comments are ignored.
"""

import itertools
import re
from dataclasses import dataclass

HEADER = "hyptri/1"

EDGES = tuple(itertools.combinations(range(4), 2))

# shape index of each edge: 01/23 -> z, 02/13 -> z', 03/12 -> z''
EDGE_SHAPE = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}


class TriangulationError(ValueError):
    """Malformed triangulation; ``line`` and ``field`` locate the problem."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


def perm_inverse(p):
    inv = [0] * 4
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_compose(p, q):
    """``p`` after ``q``."""
    return tuple(p[q[i]] for i in range(4))


def perm_sign(p):
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_str(p):
    return "".join(str(i) for i in p)


def edge_key(a, b):
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class IdealTriangulation:
    """``gluings[t][f] = (tet, perm)``; ``cusps[c] = (meridian, longitude)``
    with each curve a ``T x 4 x 4`` nested tuple of ints."""
    gluings: tuple
    cusps: tuple = ()

    @property
    def num_tetrahedra(self):
        return len(self.gluings)

    @property
    def num_cusps(self):
        return len(self.cusps)

    def glued(self, t, f):
        """``(tet, face, perm)`` glued to face ``f`` of ``t``."""
        tet, perm = self.gluings[t][f]
        return tet, perm[f], perm

    def edge_classes(self):
        """Edge classes as lists of ``(tet, (a, b))``, ordered by their
        first member in (tet, edge) order."""
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.num_tetrahedra):
            for f in range(4):
                tn, _, perm = self.glued(t, f)
                for a, b in EDGES:
                    if f not in (a, b):
                        ra, rb = find((t, (a, b))), find((tn, edge_key(perm[a], perm[b])))
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for t in range(self.num_tetrahedra):
            for e in EDGES:
                groups.setdefault(find((t, e)), []).append((t, e))
        return [groups[k] for k in sorted(groups)]

    def vertex_classes(self):
        """Cusps as lists of ``(tet, vertex)``, ordered by first member."""
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in range(self.num_tetrahedra):
            for f in range(4):
                tn, _, perm = self.glued(t, f)
                for v in range(4):
                    if v != f:
                        ra, rb = find((t, v)), find((tn, perm[v]))
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for t in range(self.num_tetrahedra):
            for v in range(4):
                groups.setdefault(find((t, v)), []).append((t, v))
        return [groups[k] for k in sorted(groups)]

    def cusp_index(self):
        """Map ``(tet, vertex) -> cusp``."""
        out = {}
        for k, members in enumerate(self.vertex_classes()):
            for m in members:
                out[m] = k
        return out


# -- validation ------------------------------------------------------------

def validate(tri, lines=None):
    """Check the invariants; ``lines`` maps (kind, ...) keys to source line
    numbers for error locations.  Returns ``tri``."""
    lines = lines or {}
    n = tri.num_tetrahedra
    if n < 1:
        raise TriangulationError("triangulation has no tetrahedra", lines.get("count"))
    for t in range(n):
        if len(tri.gluings[t]) != 4:
            raise TriangulationError(f"tet {t} needs 4 faces", lines.get(("tet", t)))
        for f in range(4):
            loc = lines.get(("face", t, f))
            tn, perm = tri.gluings[t][f]
            if not 0 <= tn < n:
                raise TriangulationError(f"tet {t} face {f} glued to missing tet {tn}", loc, "tet")
            if sorted(perm) != [0, 1, 2, 3]:
                raise TriangulationError(f"tet {t} face {f}: {perm_str(perm)} is not a "
                                         "permutation", loc, "perm")
            if tn == t and perm[f] == f:
                raise TriangulationError(f"tet {t} face {f} is glued to itself", loc, "face")
            back_tet, back_perm = tri.gluings[tn][perm[f]]
            if back_tet != t or back_perm != perm_inverse(perm):
                raise TriangulationError(f"gluing of tet {t} face {f} is not involutive", loc)
            if perm_sign(perm) != -1:
                raise TriangulationError(f"tet {t} face {f}: gluing {perm_str(perm)} preserves "
                                         "the vertex order; tetrahedra must be consistently "
                                         "oriented", loc, "perm")
    _check_edges(tri)
    classes = tri.vertex_classes()
    if len(tri.cusps) != len(classes):
        raise TriangulationError(f"{len(classes)} cusps but {len(tri.cusps)} given curve pairs",
                                 lines.get("cusps"))
    owner = tri.cusp_index()
    for c, pair in enumerate(tri.cusps):
        for which, curve in zip(("meridian", "longitude"), pair):
            _check_curve(tri, c, which, curve, owner, lines)
    return tri


def _check_edges(tri):
    """Every edge class closes up without reversing the edge."""
    parity = {}
    for t in range(tri.num_tetrahedra):
        for f in range(4):
            tn, _, perm = tri.glued(t, f)
            for a, b in EDGES:
                if f in (a, b):
                    continue
                src = (t, (a, b))
                dst = (tn, edge_key(perm[a], perm[b]))
                flip = perm[a] > perm[b]
                parity.setdefault(src, set()).add((dst, flip))
    # propagate orientations across each class
    seen = {}
    for start in sorted(parity):
        if start in seen:
            continue
        seen[start] = False
        stack = [start]
        while stack:
            cur = stack.pop()
            for dst, flip in parity[cur]:
                want = seen[cur] ^ flip
                if dst not in seen:
                    seen[dst] = want
                    stack.append(dst)
                elif seen[dst] != want:
                    t, (a, b) = start
                    raise TriangulationError(f"edge {a}{b} of tet {t} is identified with itself "
                                             "reversed")


def _check_curve(tri, c, which, curve, owner, lines):
    n = tri.num_tetrahedra
    loc = lines.get((which, c))
    if len(curve) != n or any(len(row) != 4 or any(len(w) != 4 for w in row) for row in curve):
        raise TriangulationError(f"cusp {c} {which} needs {4 * n} rows of 4", loc)
    for t in range(n):
        for v in range(4):
            rl = lines.get((which, c, t, v), loc)
            w = curve[t][v]
            if w[v] != 0:
                raise TriangulationError(f"cusp {c} {which}: nonzero weight on the face opposite "
                                         f"vertex {v} of tet {t}", rl, v)
            if any(w) and owner[(t, v)] != c:
                raise TriangulationError(f"cusp {c} {which}: weights at vertex {v} of tet {t}, "
                                         "which belongs to another cusp", rl)
            if sum(w) != 0:
                raise TriangulationError(f"cusp {c} {which} has nonzero boundary in the cusp "
                                         f"triangle at vertex {v} of tet {t}", rl)
            for f in range(4):
                if f == v:
                    continue
                tn, fn, perm = tri.glued(t, f)
                if w[f] != -curve[tn][perm[v]][fn]:
                    raise TriangulationError(f"cusp {c} {which} does not match across face {f} "
                                             f"of tet {t}", rl, f)


# -- text format -------------------------------------------------------------

_FACE = re.compile(r"^face\s+(\S+)\s*->\s*tet\s+(\S+)\s+face\s+(\S+)\s+perm\s+(\S+)$")
_CUSP = re.compile(r"^cusp\s+(\S+)\s+(meridian|longitude)$")


def _int(text, line, field):
    try:
        return int(text)
    except ValueError:
        raise TriangulationError(f"expected an integer, got {text!r}", line, field) from None


def parse_triangulation(text):
    """Parse ``hyptri/1`` text and validate it."""
    rows = []
    for num, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            rows.append((num, body))
    if not rows or rows[0][1] != HEADER:
        raise TriangulationError(f"missing {HEADER} header", rows[0][0] if rows else 1)
    if len(rows) < 2:
        raise TriangulationError("missing tetrahedron count", rows[0][0])
    count_line, count_text = rows[1]
    n = _int(count_text, count_line, "count")
    if n < 1:
        raise TriangulationError("tetrahedron count must be positive", count_line, "count")
    lines = {"count": count_line}
    pos = 2
    gluings = []
    for t in range(n):
        faces = [None] * 4
        for _ in range(4):
            if pos >= len(rows):
                raise TriangulationError(f"tet {t} is missing face lines", rows[-1][0])
            num, body = rows[pos]
            pos += 1
            m = _FACE.match(body)
            if not m:
                raise TriangulationError(f"expected 'face k -> tet t face f perm abcd', got "
                                         f"{body!r}", num)
            k = _int(m.group(1), num, "face")
            tn = _int(m.group(2), num, "tet")
            fn = _int(m.group(3), num, "target face")
            ptext = m.group(4)
            if len(ptext) != 4 or not ptext.isdigit() or sorted(ptext) != list("0123"):
                raise TriangulationError(f"{ptext!r} is not a permutation of 0123", num, "perm")
            perm = tuple(int(ch) for ch in ptext)
            if not 0 <= k < 4 or faces[k] is not None:
                raise TriangulationError(f"bad or repeated face index {k}", num, "face")
            if perm[k] != fn:
                raise TriangulationError(f"perm {ptext} sends face {k} to {perm[k]}, not {fn}",
                                         num, "perm")
            faces[k] = (tn, perm)
            lines[("face", t, k)] = num
        gluings.append(tuple(faces))
    cusps = {}
    lines["cusps"] = rows[pos][0] if pos < len(rows) else rows[-1][0]
    while pos < len(rows):
        num, body = rows[pos]
        pos += 1
        m = _CUSP.match(body)
        if not m:
            raise TriangulationError(f"expected 'cusp c meridian|longitude', got {body!r}", num)
        c, which = _int(m.group(1), num, "cusp"), m.group(2)
        if which in cusps.setdefault(c, {}):
            raise TriangulationError(f"cusp {c} {which} given twice", num)
        lines[(which, c)] = num
        curve = []
        for t in range(n):
            tet_rows = []
            for v in range(4):
                if pos >= len(rows):
                    raise TriangulationError(f"cusp {c} {which} is truncated", num)
                rnum, rbody = rows[pos]
                pos += 1
                parts = rbody.split()
                if len(parts) != 4:
                    raise TriangulationError(f"expected 4 weights, got {len(parts)}", rnum)
                tet_rows.append(tuple(_int(p, rnum, i) for i, p in enumerate(parts)))
                lines[(which, c, t, v)] = rnum
            curve.append(tuple(tet_rows))
        cusps[c][which] = tuple(curve)
    pairs = []
    for c in range(len(cusps)):
        if c not in cusps or set(cusps[c]) != {"meridian", "longitude"}:
            raise TriangulationError(f"cusp {c} needs a meridian and a longitude", lines["cusps"])
        pairs.append((cusps[c]["meridian"], cusps[c]["longitude"]))
    return validate(IdealTriangulation(tuple(gluings), tuple(pairs)), lines)


def serialize(tri):
    """Canonical ``hyptri/1`` text."""
    out = [HEADER, str(tri.num_tetrahedra)]
    for t in range(tri.num_tetrahedra):
        for f in range(4):
            tn, fn, perm = tri.glued(t, f)
            out.append(f"face {f} -> tet {tn} face {fn} perm {perm_str(perm)}")
    for c, pair in enumerate(tri.cusps):
        for which, curve in zip(("meridian", "longitude"), pair):
            out.append(f"cusp {c} {which}")
            for row in curve:
                for w in row:
                    out.append(" ".join(str(x) for x in w))
    return "\n".join(out) + "\n"


def from_snappea(text):
    """Read an orientable SnapPea triangulation file (right-handed sheets of
    the peripheral curves only).  Cusps are renumbered in order of first
    occurrence."""
    lines = [ln.strip() for ln in text.splitlines()]
    i = next(k for k, ln in enumerate(lines) if re.fullmatch(r"\d+\s+\d+", ln))
    real, fake = (int(x) for x in lines[i].split())
    i += 1 + real + fake
    while not lines[i]:
        i += 1
    n = int(lines[i])
    i += 1
    tokens = " ".join(lines[i:]).split()
    per_tet = 4 + 4 + 4 + 64 + 2
    gluings, raw_cusp, curves = [], [], []
    for t in range(n):
        chunk = tokens[t * per_tet:(t + 1) * per_tet]
        nbrs = [int(x) for x in chunk[0:4]]
        perms = [tuple(int(ch) for ch in p) for p in chunk[4:8]]
        raw_cusp.append([int(x) for x in chunk[8:12]])
        nums = [int(x) for x in chunk[12:76]]
        mer = tuple(tuple(nums[4 * v + f] for f in range(4)) for v in range(4))
        lon = tuple(tuple(nums[32 + 4 * v + f] for f in range(4)) for v in range(4))
        curves.append((mer, lon))
        gluings.append(tuple(zip(nbrs, perms)))
    tri = IdealTriangulation(tuple(gluings))
    owner = tri.cusp_index()
    pairs = []
    for c in range(len(tri.vertex_classes())):
        pair = []
        for k in range(2):
            pair.append(tuple(tuple(curves[t][k][v] if owner[(t, v)] == c else (0, 0, 0, 0)
                                    for v in range(4)) for t in range(n)))
        pairs.append(tuple(pair))
    return validate(IdealTriangulation(tri.gluings, tuple(pairs)))

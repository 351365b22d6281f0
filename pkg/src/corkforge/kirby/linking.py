"""Linking matrices, boundary surgery descriptions and homology."""

from dataclasses import dataclass
from fractions import Fraction

from .diagram import (DOTTED, MARKED, TWO_HANDLE, DiagramError, SurgeryComponent,
                      SurgeryDiagram, crossing_linking, require_valid)


def linking_number(d, a, b):
    s = crossing_linking(d, a, b)
    if s % 2:
        raise DiagramError(f"odd signed crossing sum between {a} and {b}")
    return s // 2


def matrix_ids(d):
    """Component ids indexing the linking matrix: non-marked, canonical order."""
    return [c.id for c in d.canonical().components if c.role != MARKED]


def linking_matrix(d):
    """Symmetric linking matrix over the non-marked components.

    Diagonal entries are framings for 2-handles and 0 for dotted circles.
    Returns a list of lists of ints.
    """
    ids = matrix_ids(d)
    n = len(ids)
    m = [[0] * n for _ in range(n)]
    for i, a in enumerate(ids):
        c = d.component(a)
        m[i][i] = c.framing if c.role == TWO_HANDLE else 0
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = linking_number(d, a, ids[j])
    return m


def boundary_surgery(d):
    """Surgery description of the boundary 3-manifold.

    Dotted circles become 0-surgeries, a 2-handle with framing k becomes
    k-surgery, marked curves are kept without coefficient.
    """
    require_valid(d)
    comps = []
    for c in d.components:
        if c.role == DOTTED:
            coeff = Fraction(0)
        elif c.role == TWO_HANDLE:
            coeff = Fraction(c.framing)
        else:
            coeff = None
        comps.append(SurgeryComponent(c.id, c.arcs, coeff))
    return SurgeryDiagram(tuple(comps), tuple(d.crossings)).canonical()


def determinant(m):
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_invariants(rows, ncols):
    """Invariant factors of the cokernel of an integer relation matrix.

    ``rows`` are relations on ``ncols`` generators.  Returns the diagonal of
    the Smith normal form (length ``min(len(rows), ncols)``, non-negative,
    each dividing the next, zeros last).
    """
    a = [list(r) for r in rows]
    m = len(a)
    size = min(m, ncols)
    diag = []
    for t in range(size):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m)
                   for j in range(t, ncols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        _swap(a, t, i, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, ncols) if a[t][j]]
            if rest:
                _, i, j = min(rest)
                _swap(a, t, i, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
    return diag + [0] * (size - len(diag))


def _swap(a, t, i, j):
    a[t], a[i] = a[i], a[t]
    for r in a:
        r[t], r[j] = r[j], r[t]


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """A finitely generated abelian group Z^rank + sum of Z/t_i (t_i > 1)."""
    rank: int
    torsion: tuple

    @property
    def trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


def cokernel(rows, ncols):
    inv = smith_invariants(rows, ncols)
    nonzero = [x for x in inv if x]
    rank = ncols - len(nonzero)
    return AbelianGroupInvariants(rank, tuple(x for x in nonzero if x > 1))


def first_homology(m):
    """H_1 of the 3-manifold given by surgery on a framed link with linking
    matrix ``m``: the cokernel of ``m``."""
    n = len(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise DiagramError("linking matrix must be symmetric")
    return cokernel(m, n)


def handle_homology(d):
    """H_1 of the 4-manifold: Z^(dotted) modulo the 2-handle rows."""
    dots = [c.id for c in d.canonical().components if c.role == DOTTED]
    twos = [c.id for c in d.canonical().components if c.role == TWO_HANDLE]
    rows = [[linking_number(d, h, j) for j in dots] for h in twos]
    return cokernel(rows, len(dots))

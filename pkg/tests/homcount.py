"""Test helper: count homomorphisms from the boundary 3-manifold group of a
diagram to a small permutation group.  Such counts are invariant under
Kirby moves and catch crossing-level mistakes that homology would miss."""

import itertools

from corkforge.kirby.diagram import DOTTED, MARKED
from corkforge.kirby.groups import wirtinger_generators


def _mul(p, q):  # p then q
    return tuple(q[i] for i in p)


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def boundary_relators(d):
    gen = wirtinger_generators(d)
    at_end = {x.under_in: x for x in d.crossings}
    rels = []
    for x in d.crossings:
        o, a, b = gen[x.over_in] + 1, gen[x.under_in] + 1, gen[x.under_out] + 1
        rels.append((b, o * x.sign, -a, -o * x.sign))
    owner = d.arc_owner()
    for c in d.components:
        if c.role == MARKED:
            continue
        m = gen[c.arcs[0]] + 1
        word = []
        for a in c.arcs:
            x = at_end.get(a)
            if x is not None:
                word.insert(0, (gen[x.over_in] + 1) * x.sign)
        writhe = sum(x.sign for x in d.crossings
                     if owner[x.over_in] == c.id and owner[x.under_in] == c.id)
        k = 0 if c.role == DOTTED else c.framing
        word += [m if k - writhe > 0 else -m] * abs(k - writhe)
        rels.append(tuple(word))
    n = max(gen.values()) + 1 if gen else 0
    return n, rels


def count_homs(d, degree=3):
    """Number of homomorphisms to the symmetric group of the given degree."""
    n, rels = boundary_relators(d)
    gen = wirtinger_generators(d)
    wirt = [(gen[x.under_in], gen[x.over_in], gen[x.under_out], x.sign) for x in d.crossings]
    elems = list(itertools.permutations(range(degree)))
    ident = tuple(range(degree))

    def conj(o, a, s):  # o^s a o^-s
        if s < 0:
            o = _inv(o)
        return _mul(_mul(o, a), _inv(o))

    def propagate(assign):
        changed = True
        while changed:
            changed = False
            for a, o, b, s in wirt:
                A, O, B = assign[a], assign[o], assign[b]
                if O is None:
                    continue
                if A is not None:
                    v = conj(O, A, s)
                    if B is None:
                        assign[b] = v
                        changed = True
                    elif B != v:
                        return False
                elif B is not None:
                    assign[a] = conj(O, B, -s)
                    changed = True
        return True

    def value(assign, word):
        g = ident
        for x in word:
            e = assign[abs(x) - 1]
            g = _mul(g, e if x > 0 else _inv(e))
        return g

    def dfs(assign):
        if not propagate(assign):
            return 0
        free = [i for i in range(n) if assign[i] is None]
        if not free:
            return int(all(value(assign, r) == ident for r in rels))
        pick = next((o for a, o, b, _ in wirt if assign[o] is None
                     and (assign[a] is not None or assign[b] is not None)), free[0])
        total = 0
        for e in elems:
            nxt = list(assign)
            nxt[pick] = e
            total += dfs(nxt)
        return total

    return dfs([None] * n)
